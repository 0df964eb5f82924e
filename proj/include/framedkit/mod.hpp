#pragma once
// Monoids, homomorphisms, bimodules, and equivariant maps inside a framed
// instance, and the module double category they form over it. Horizontal
// composition of bimodules is the tensor over the middle monoid, computed as
// a local coequalizer of the two middle actions; every other operation is
// induced through the universal properties of the base instance.
//
// Also provided: the finite-category reading of span-encoded monoids, the
// hom-matrix (profunctor) reading of matrix-encoded bimodules, and an
// independent partition oracle for the composite of two profunctors.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "framedkit/dbl.hpp"
#include "framedkit/fin.hpp"
#include "framedkit/laws.hpp"
#include "framedkit/mat.hpp"

namespace framedkit::mod {

using fin::FinFn;
using fin::FinSet;

// ---------------------------------------------------------------------------
// data
// ---------------------------------------------------------------------------

// A monoid in the horizontal direction: a carrier A : R ⇸ R together with
// globular unit and multiplication squares.
struct MonoidData {
  dbl::Obj base;       // R
  dbl::HCell carrier;  // A : R ⇸ R
  dbl::Square unit;    // e : U_R ⇒ A
  dbl::Square mult;    // m : A⊙A ⇒ A
};

// A homomorphism of monoids: a vertical arrow f of the base together with a
// square φ : A ⇒ B over (f,f) respecting unit and multiplication.
struct MonoidHom {
  MonoidData dom, cod;
  dbl::Vert f;
  dbl::Square map;
};

// A bimodule: a 1-cell M : R ⇸ S with a left action of the monoid A over R
// and a right action of the monoid B over S.
struct BimoduleData {
  MonoidData left, right;
  dbl::HCell cell;   // M : R ⇸ S
  dbl::Square actL;  // A⊙M ⇒ M
  dbl::Square actR;  // M⊙B ⇒ M
  // When the bimodule was built freely on a generating cell X (as A⊙X⊙B),
  // that cell. Used only by the samplers to construct maps out of the
  // bimodule; ignored by equality and by every checker.
  std::optional<dbl::HCell> generator;
};

// A map of bimodules over a pair of monoid homomorphisms.
struct EquivariantMap {
  BimoduleData src, tgt;
  MonoidHom lh, rh;
  dbl::Square map;  // src.cell ⇒ tgt.cell over (lh.f, rh.f)
};

// ---------------------------------------------------------------------------
// constructions
// ---------------------------------------------------------------------------

// the unit 1-cell U_R as a monoid, with unitor multiplication
MonoidData unitMonoid(const dbl::Instance& d, const dbl::Obj& r);
// the identity homomorphism
MonoidHom idHom(const dbl::Instance& d, const MonoidData& a);
// vertical composition of homomorphisms (g after f, diagrammatic)
MonoidHom composeHom(const dbl::Instance& d, const MonoidHom& f, const MonoidHom& g);
// A as an (A,A)-bimodule, both actions the multiplication
BimoduleData unitBimodule(const dbl::Instance& d, const MonoidData& a);
// the free (A,B)-bimodule (A⊙X)⊙B on a 1-cell X : R ⇸ S
BimoduleData freeBimodule(const dbl::Instance& d, const MonoidData& a, const dbl::HCell& x,
                          const MonoidData& b);

// ---------------------------------------------------------------------------
// validity (callable on raw, possibly broken data; never throws on bad data)
// ---------------------------------------------------------------------------

laws::LawReport checkMonoid(const dbl::Instance& d, const MonoidData& a);
laws::LawReport checkMonoidHom(const dbl::Instance& d, const MonoidHom& h);
laws::LawReport checkBimodule(const dbl::Instance& d, const BimoduleData& m);
laws::LawReport checkEquivariant(const dbl::Instance& d, const EquivariantMap& e);

// ---------------------------------------------------------------------------
// tensor over a monoid
// ---------------------------------------------------------------------------

struct TensorResult {
  BimoduleData bimodule;  // M ⊙_B N with the induced outer actions
  dbl::Square proj;       // globular projection M⊙N ⇒ M⊙_B N in the base
};

// Coequalize the two middle actions (M⊙B)⊙N ⇒ M⊙N and induce the outer
// actions by descent. Throws InputError when the middle monoids differ.
TensorResult tensorOverMonoid(const dbl::Instance& d, const BimoduleData& m,
                              const BimoduleData& n);

// Horizontal composition of equivariant maps on the tensors: requires
// a.rh = b.lh; descent failure (broken equivariance premises) throws.
EquivariantMap composeEquivariant(const dbl::Instance& d, const EquivariantMap& a,
                                  const EquivariantMap& b);

// Restriction of a bimodule along a pair of homomorphisms: the base
// restriction cell with actions induced through its cartesian square.
struct BimoduleRestriction {
  BimoduleData bimodule;
  EquivariantMap cart;  // cartesian: bimodule ⇒ m over (phi, psi)
};
BimoduleRestriction restrictBimodule(const dbl::Instance& d, const MonoidHom& phi,
                                     const BimoduleData& m, const MonoidHom& psi);

// ---------------------------------------------------------------------------
// the module double category
// ---------------------------------------------------------------------------

// payload accessors for the instance's wrappers
const MonoidData& monoidOf(const dbl::Obj& a);
const MonoidHom& homOf(const dbl::Vert& f);
const BimoduleData& bimoduleOf(const dbl::HCell& m);
const EquivariantMap& equivariantOf(const dbl::Square& s);

// validating constructors (fail fast on data that breaks the axioms)
dbl::Obj wrapMonoid(const dbl::Instance& base, MonoidData a);
dbl::Vert wrapHom(const dbl::Instance& base, MonoidHom h);
dbl::HCell wrapBimodule(const dbl::Instance& base, BimoduleData m);
dbl::Square wrapEquivariant(const dbl::Instance& base, EquivariantMap e);

// Hook for sampling monoids over a particular base (the generic instance
// only knows how to sample unit monoids).
using MonoidSampler = std::function<MonoidData(fin::Rng&, std::size_t maxSize)>;

std::unique_ptr<dbl::Instance> makeModInstance(const dbl::Instance& base,
                                               MonoidSampler sampler = {});

// modules over spans (monoids = finite categories) and over matrices
// (monoids = hom-matrix categories, bimodules = profunctors)
const dbl::Instance& modSpanInstance();
const dbl::Instance& modMatInstance();

// The involution of the module category induced by an involution of the
// base: a bimodule is sent to its reverse over the opposite monoids.
laws::InvolutionData modInvolution(const dbl::Instance& base,
                                   const laws::InvolutionData& baseInv);

// ---------------------------------------------------------------------------
// finite categories and span-encoded monoids
// ---------------------------------------------------------------------------

struct FinCat {
  FinSet objects;
  FinSet morphisms;
  FinFn src, tgt;  // morphisms → objects
  FinFn ident;     // objects → morphisms
  // comp[i][j] = the composite "i then j", defined exactly when tgt(i)=src(j)
  std::vector<std::vector<std::optional<std::size_t>>> comp;

  std::optional<std::size_t> compose(std::size_t i, std::size_t j) const;
};

laws::LawReport checkFinCat(const FinCat& c);
// all categories with at most the given numbers of objects and morphisms
// (identities included in the count); isomorphic duplicates are kept
std::vector<FinCat> enumerateFinCats(std::size_t maxObjects, std::size_t maxMorphisms);
bool finCatIso(const FinCat& a, const FinCat& b);

// span encoding: base = objects, carrier apex = morphisms, legs = src/tgt,
// multiplication = composition
MonoidData finCatToMonoid(const FinCat& c);
FinCat monoidToFinCat(const MonoidData& a);  // inverse, for span-encoded monoids
// matrix encoding: hom-sets as entries, multiplication = composition
MonoidData finCatToMatMonoid(const FinCat& c);
FinCat matMonoidToFinCat(const MonoidData& a);

// A free category on a graph over ordered vertices (edges only ascend), with
// the generator decomposition of every morphism. The morphisms are the paths.
struct PathCat {
  FinCat cat;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> edgeMorphism;                 // edge → morphism index
  std::vector<std::vector<std::size_t>> factorization;   // morphism → edge indices
};
PathCat randomPathCat(fin::Rng& rng, std::size_t maxVertices);

// ---------------------------------------------------------------------------
// profunctors (matrix-encoded bimodules)
// ---------------------------------------------------------------------------

struct ProfData {
  FinCat dom, cod;
  // at[i][j]: the set at (dom object i, cod object j)
  std::vector<std::vector<FinSet>> at;
  // leftAct[u][j] : at[tgt u][j] → at[src u][j]   (contravariant)
  std::vector<std::vector<FinFn>> leftAct;
  // rightAct[v][i]: at[i][src v] → at[i][tgt v]   (covariant)
  std::vector<std::vector<FinFn>> rightAct;
};

laws::LawReport checkProfunctor(const ProfData& p);
ProfData identityProfunctor(const FinCat& c);
// the profunctor free on a random generator matrix G, with entries
// Σ_{i,j} dom(a,i) × G(i,j) × cod(j,c) and actions given by composition
ProfData randomProfunctor(fin::Rng& rng, const PathCat& dom, const PathCat& cod,
                          std::size_t maxSize);

BimoduleData profunctorToBimodule(const ProfData& p);
ProfData bimoduleToProfunctor(const BimoduleData& m);  // matrix-encoded bimodules

// A partition: sorted blocks of sorted labels (canonical form).
using Partition = std::vector<std::vector<std::string>>;
Partition partitionOf(const FinFn& proj);  // fibers of a projection

// Independent oracle for the composite profunctor: for every object pair
// (a,c), the partition of the middle sum Σ_b M(a,b)×N(b,c) generated by the
// relations (x·u, y) ~ (x, u·y). Computed directly from the action tables.
std::vector<std::vector<Partition>> coendOracle(const ProfData& m, const ProfData& n);

}  // namespace framedkit::mod
