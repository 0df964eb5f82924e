#pragma once

#include <any>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "framedkit/fin.hpp"

namespace framedkit::dbl {

using nlohmann::json;

// Cells carry instance-specific payloads behind std::any. Frames are part of
// the wrapper so generic code can do its bookkeeping without unpacking.

struct Obj {
  std::any v;
};

struct Vert {
  std::any v;
  Obj dom, cod;
};

struct HCell {
  std::any v;
  Obj lf, rf;  // left and right frame
};

// A 2-cell src ⇒ tgt with la: L(src)→L(tgt) and ra: R(src)→R(tgt).
struct Square {
  std::any v;
  HCell src, tgt;
  Vert la, ra;
};

struct Restriction {
  HCell cell;   // f*Mg*
  Square cart;  // cartesian: cell ⇒ M over (f,g)
};

struct Extension {
  HCell cell;     // f_!Mg_!
  Square opcart;  // opcartesian: M ⇒ cell over (f,g)
};

struct CartesianWitness {
  Square square;
  bool opcartesian = false;
};

struct LocalCoeq {
  HCell cell;   // quotient 1-cell
  Square proj;  // globular projection N ⇒ cell
};

// The instance contract. Every concrete double category (spans, matrices,
// fibration cells, monoid bimodules) implements this; all generic
// constructions and every law checker are written against it.
class Instance {
 public:
  virtual ~Instance() = default;
  virtual std::string name() const = 0;

  // equality (strict; 1-cell comparison up to iso goes through findGlobularIso)
  virtual bool objEq(const Obj&, const Obj&) const = 0;
  virtual bool vertEq(const Vert&, const Vert&) const = 0;
  virtual bool hcellEq(const HCell&, const HCell&) const = 0;
  virtual bool squareEq(const Square&, const Square&) const = 0;

  // vertical category (strict)
  virtual Vert vId(const Obj&) const = 0;
  virtual Vert vCompose(const Vert& f, const Vert& g) const = 0;  // f then g

  // horizontal structure
  virtual HCell hUnit(const Obj&) const = 0;
  virtual HCell hCompose(const HCell&, const HCell&) const = 0;
  virtual Square sqId(const HCell&) const = 0;
  virtual Square sqUnit(const Vert&) const = 0;  // U_f: U_A ⇒ U_B over (f,f)
  virtual Square vCompose2(const Square& a, const Square& b) const = 0;  // a then b
  virtual Square hCompose2(const Square& a, const Square& b) const = 0;  // a beside b
  virtual Square assoc(const HCell& m, const HCell& n, const HCell& p) const = 0;
  virtual Square lunit(const HCell&) const = 0;  // U_A⊙M ⇒ M
  virtual Square runit(const HCell&) const = 0;  // M⊙U_B ⇒ M
  virtual std::optional<Square> invert(const Square&) const = 0;

  // chosen cleavage
  virtual Restriction restrictCell(const Vert& f, const HCell& m, const Vert& g) const = 0;
  virtual Extension extendCell(const Vert& f, const HCell& m, const Vert& g) const = 0;

  // Exact factorization through a (claimed) cartesian square.
  //   cart: W ⇒ M over (f,g); cand: X ⇒ M over (f∘u, g∘v)
  // Returns the unique χ: X ⇒ W over (u,v) with cand = χ then cart, or
  // nullopt when existence or uniqueness fails (the witness is then not
  // cartesian, which callers report as a law violation).
  virtual std::optional<Square> factorCart(const Square& cart, const Square& cand, const Vert& u,
                                           const Vert& v) const = 0;
  // Dual: opcart: M ⇒ W over (f,g); cand: M ⇒ X over (u∘f, v∘g).
  // Returns χ: W ⇒ X over (u,v) with cand = opcart then χ.
  virtual std::optional<Square> factorOpcart(const Square& opcart, const Square& cand,
                                             const Vert& u, const Vert& v) const = 0;

  // enumeration of all squares src ⇒ tgt over (f,g); BudgetError when the
  // space is too large. cb returns false to stop early.
  virtual void forEachSquare(const HCell& src, const HCell& tgt, const Vert& f, const Vert& g,
                             const std::function<bool(const Square&)>& cb) const = 0;

  // enumeration of all vertical arrows a → b; BudgetError when the space is
  // too large. cb returns false to stop early.
  virtual void forEachVert(const Obj& a, const Obj& b,
                           const std::function<bool(const Vert&)>& cb) const = 0;

  // enumeration of all horizontal cells a ⇸ b whose underlying carrier stays
  // within maxSize, up to canonical relabeling; BudgetError when the space is
  // too large. cb returns false to stop early. Instances without a usable
  // canonical form reject the request.
  virtual void forEachHCell(const Obj& a, const Obj& b, std::size_t maxSize,
                            const std::function<bool(const HCell&)>& cb) const;

  // canonical comparison of parallel 1-cells: globular iso via constrained
  // bijection search, deterministic
  virtual std::optional<Square> findGlobularIso(const HCell&, const HCell&) const = 0;

  // local coequalizer of a globular parallel pair a,b: M ⇒ N
  virtual LocalCoeq localCoequalizer(const Square& a, const Square& b) const = 0;
  // descent: cand: N ⇒ Y over (u,v) coequalizing the pair behind q
  virtual std::optional<Square> factorCoeq(const LocalCoeq& q, const Square& cand, const Vert& u,
                                           const Vert& v) const = 0;

  // samplers (seed-deterministic); sampleVert is empty when no vertical
  // arrow dom→cod exists
  virtual Obj sampleObj(fin::Rng&, std::size_t maxSize) const = 0;
  virtual std::optional<Vert> sampleVert(fin::Rng&, const Obj& dom, const Obj& cod) const = 0;
  virtual HCell sampleHCell(fin::Rng&, const Obj& lf, const Obj& rf, std::size_t maxSize) const = 0;
  virtual std::optional<Square> sampleSquare(fin::Rng&, const HCell& src, const HCell& tgt,
                                             const Vert& f, const Vert& g) const = 0;

  // witness serialization
  virtual json objJson(const Obj&) const = 0;
  virtual json vertJson(const Vert&) const = 0;
  virtual json hcellJson(const HCell&) const = 0;
  virtual json squareJson(const Square&) const = 0;
};

// frame bookkeeping checks
bool framesOk(const Instance&, const Square&);
bool globular(const Instance&, const Square&);

// companions and conjoints, built from the cleavage by factoring the unit
// square through the cartesian witnesses
struct CompanionData {
  Vert f;
  HCell companion;      // A⇸B for f: A→B
  Square compToUnit;    // companion ⇒ U_B over (f,id), cartesian
  Square compFromUnit;  // U_A ⇒ companion over (id,f)
  HCell conjoint;       // B⇸A
  Square conjToUnit;    // conjoint ⇒ U_B over (id,f), cartesian
  Square conjFromUnit;  // U_A ⇒ conjoint over (f,id)
};
CompanionData companionConjoint(const Instance&, const Vert& f);

// factorization through a witness with verification; nullopt means the
// universal property failed (law violation at the call site)
std::optional<Square> factorUniversal(const Instance&, const CartesianWitness&,
                                      const Square& candidate, const Vert& u, const Vert& v);

// all factorizations found by brute force; the oracle for cartesianness
std::vector<Square> factorExhaustive(const Instance&, const CartesianWitness&,
                                     const Square& candidate, const Vert& u, const Vert& v);

// restriction compared against companion ⊙ M ⊙ conjoint
struct BcoReport {
  bool pass = false;
  std::string detail;
  std::optional<Square> iso;
};
BcoReport bcObjectsRepresent(const Instance&, const Vert& f, const HCell& m, const Vert& g);

// ---- pasting planner ----------------------------------------------------
// Composites of 1-cells are compared after normalizing parenthesization and
// unit insertions to a right comb; cohere() produces the canonical globular
// iso between two shapes of the same cell list.

class HTree {
 public:
  static HTree leaf(HCell m);
  static HTree unit(Obj a);
  static HTree node(HTree l, HTree r);
  HTree operator*(const HTree& rhs) const { return node(*this, rhs); }

  bool isLeaf() const { return kind_ == Kind::Leaf; }
  bool isUnit() const { return kind_ == Kind::Unit; }
  const HCell& cell() const { return cell_; }
  const Obj& unitObj() const { return obj_; }
  const HTree& left() const { return *l_; }
  const HTree& right() const { return *r_; }

 private:
  enum class Kind { Leaf, Unit, Node } kind_ = Kind::Unit;
  HCell cell_;
  Obj obj_;
  std::shared_ptr<const HTree> l_, r_;
};

HCell evalTree(const Instance&, const HTree&);
std::vector<HCell> flattenTree(const HTree&);
// evalTree(from) ⇒ evalTree(to); requires equal flattened cell lists
Square cohere(const Instance&, const HTree& from, const HTree& to);

}  // namespace framedkit::dbl
