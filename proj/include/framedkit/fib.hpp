#pragma once

#include <any>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "framedkit/dbl.hpp"
#include "framedkit/fin.hpp"
#include "framedkit/laws.hpp"
#include "framedkit/mod.hpp"

// Monoidal bifibrations over finite sets and the framed bicategory of
// fibered cells they generate: horizontal 1-cells A⇸B are total objects over
// A×B, composition is pushforward of the pullback of the external tensor
// along the diagonal, and all coherence cells arise by unique factorization
// through the chosen cleavage.
namespace framedkit::fib {

using fin::FinFn;
using fin::FinSet;
using nlohmann::json;

// total objects and total arrows carry instance-specific payloads
struct TotObj {
  std::any v;
};

struct TotArr {
  std::any v;
  TotObj src, tgt;
  FinFn base;  // the base arrow the total arrow lies over
};

// the chosen one-point base object
const FinSet& terminalSet();

// A monoidal bifibration over the cartesian category of finite sets, with a
// chosen normal cleavage and opcleavage. The projection is strictly
// monoidal: the base of a tensor is the product of the bases.
class Fibration {
 public:
  virtual ~Fibration() = default;
  virtual std::string name() const = 0;

  virtual bool totEq(const TotObj&, const TotObj&) const = 0;
  virtual bool arrEq(const TotArr&, const TotArr&) const = 0;
  virtual const FinSet& baseOf(const TotObj&) const = 0;

  virtual TotArr idArr(const TotObj&) const = 0;
  virtual TotArr compose(const TotArr& a, const TotArr& b) const = 0;  // a then b

  // the cleavage: f*M → M for f into the base of M, and M → f_!M for f out
  // of it; lifts along identities are identities
  virtual TotArr cartesianLift(const FinFn& f, const TotObj& m) const = 0;
  virtual TotArr opcartesianLift(const FinFn& f, const TotObj& m) const = 0;

  // Unique factorizations: for cart: W→M over f and cand: X→M over u then f,
  // the χ: X→W over u with χ then cart = cand; dually for opcart: M→W over f
  // and cand: M→X over f then u. InputError when the premise fails.
  virtual TotArr factorCart(const TotArr& cart, const TotArr& cand, const FinFn& u) const = 0;
  virtual TotArr factorOpcart(const TotArr& opcart, const TotArr& cand,
                              const FinFn& u) const = 0;

  virtual bool isCartesian(const TotArr&) const = 0;
  virtual bool isOpcartesian(const TotArr&) const = 0;
  virtual std::optional<TotArr> invertArr(const TotArr&) const = 0;
  // diagnostic for a failed inversion: the element losing bijectivity
  virtual json invertibilityWitness(const TotArr&) const = 0;

  // monoidal structure on the total category, strict over the base
  virtual TotObj unitObj() const = 0;  // I, over the terminal set
  virtual TotObj tensorObj(const TotObj&, const TotObj&) const = 0;
  virtual TotArr tensorArr(const TotArr&, const TotArr&) const = 0;
  virtual TotArr tensorAssoc(const TotObj& m, const TotObj& n,
                             const TotObj& p) const = 0;   // (M⊗N)⊗P → M⊗(N⊗P)
  virtual TotArr tensorLunit(const TotObj&) const = 0;     // I⊗M → M
  virtual TotArr tensorRunit(const TotObj&) const = 0;     // M⊗I → M

  // fiberwise coequalizer of a parallel pair lying over an identity,
  // returned as the projection N → Q; descent through it
  virtual TotArr coeqArr(const TotArr& a, const TotArr& b) const = 0;
  virtual std::optional<TotArr> factorCoeq(const TotArr& proj, const TotArr& cand,
                                           const FinFn& u) const = 0;

  // the first isomorphism src → tgt over an identity base, deterministically
  virtual std::optional<TotArr> findIso(const TotObj& src, const TotObj& tgt) const = 0;

  // all arrows src → tgt over the base arrow; BudgetError on blowup; cb
  // returns false to stop early
  virtual void forEachArr(const TotObj& src, const TotObj& tgt, const FinFn& base,
                          const std::function<bool(const TotArr&)>& cb) const = 0;

  // seed-deterministic samplers
  virtual TotObj sampleTot(fin::Rng&, const FinSet& base, std::size_t maxSize) const = 0;
  virtual std::optional<TotArr> sampleArr(fin::Rng&, const TotObj& src, const TotObj& tgt,
                                          const FinFn& base) const = 0;

  virtual json totJson(const TotObj&) const = 0;
  virtual json arrJson(const TotArr&) const = 0;
};

// ---------------------------------------------------------------------------
// the arrow fibration: total objects are maps into the base object
// ---------------------------------------------------------------------------

struct ArrObject {
  FinSet total;
  FinSet base;
  FinFn proj;  // total → base

  bool operator==(const ArrObject& o) const {
    return total == o.total && base == o.base && proj == o.proj;
  }
  bool operator!=(const ArrObject& o) const { return !(*this == o); }
};

TotObj makeArrObject(FinSet total, FinSet base, FinFn proj);
TotArr makeArrArrow(TotObj src, TotObj tgt, FinFn base, FinFn map);
const ArrObject& arrObjOf(const TotObj&);
const FinFn& arrMapOf(const TotArr&);

// ---------------------------------------------------------------------------
// the family fibration: total objects are families of sets over the index
// ---------------------------------------------------------------------------

struct FamObject {
  FinSet index;
  std::vector<FinSet> fibers;  // one per index element

  bool operator==(const FamObject& o) const { return index == o.index && fibers == o.fibers; }
  bool operator!=(const FamObject& o) const { return !(*this == o); }
};

TotObj makeFamObject(FinSet index, std::vector<FinSet> fibers);
TotArr makeFamArrow(TotObj src, TotObj tgt, FinFn base, std::vector<FinFn> comps);
const FamObject& famObjOf(const TotObj&);
const std::vector<FinFn>& famMapsOf(const TotArr&);

const Fibration& arrFibration();
const Fibration& famFibration();

// Sampled fibration axioms: normality of the cleavage, cartesianness of the
// lifts, preservation of lifts by the tensor, strictness of the projection,
// factorization round trips, and invertibility of the tensor constraints.
laws::LawReport checkFibration(const Fibration&, const laws::Sampler& = {});

// Δ*(M⊗N): the fiberwise tensor of two objects over the same base
TotObj fiberTensor(const Fibration&, const TotObj& m, const TotObj& n);

// ---------------------------------------------------------------------------
// base change
// ---------------------------------------------------------------------------

// For a commuting base square (h then g = k then f, with m over the codomain
// of h) the canonical comparison k_! h* m → f* g_! m, built by factoring the
// cleavage pentagon, together with its invertibility verdict.
struct BCVerdict {
  FinFn h, k, f, g;
  TotArr transform;
  bool iso = false;
  json witness = json::object();  // failing element when not invertible
};
BCVerdict bcCheck(const Fibration&, const FinFn& h, const FinFn& k, const FinFn& f,
                  const FinFn& g, const TotObj& m);

// the object f_! π_X^* I over B, for f: X → B
TotObj freeCategoryMorphism(const Fibration&, const FinFn& f);

// ---------------------------------------------------------------------------
// the framed bicategory of a fibration
// ---------------------------------------------------------------------------

dbl::Obj frObj(FinSet a);
dbl::Vert frVert(FinFn f);
dbl::HCell frCell(const Fibration&, FinSet lf, FinSet rf, TotObj m);
dbl::Square frSquare(const Fibration&, dbl::HCell src, dbl::HCell tgt, FinFn f, FinFn g,
                     TotArr a);

const FinSet& frObjOf(const dbl::Obj&);
const FinFn& frVertOf(const dbl::Vert&);
const TotObj& frCellOf(const dbl::HCell&);
const TotArr& frArrOf(const dbl::Square&);

std::unique_ptr<dbl::Instance> makeFrInstance(const Fibration&);
const dbl::Instance& frArrInstance();
const dbl::Instance& frFamInstance();
// the fibration behind an instance built by makeFrInstance; InputError otherwise
const Fibration& fibrationOf(const dbl::Instance&);

// The free enriched category on a finite category: carrier (s,t)_! π^* I
// with hom-objects the coproducts of units over the hom-sets, unit induced
// by the identity assignment, multiplication induced by composition.
mod::MonoidData freeEnrichedCategory(const dbl::Instance& fr, const mod::FinCat& c);

// ---------------------------------------------------------------------------
// comparison with the span and matrix instances
// ---------------------------------------------------------------------------

laws::FramedFunctor frArrToSpan();
laws::EquivalenceChoices frArrToSpanChoices();
laws::FramedFunctor frFamToMat();
laws::EquivalenceChoices frFamToMatChoices();

}  // namespace framedkit::fib
