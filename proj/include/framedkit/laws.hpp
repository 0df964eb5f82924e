#pragma once

// Reusable law checkers for double-category instances: category and
// coherence axioms, companion/conjoint equations, structure-preserving
// functors and transformations between instances, preservation of
// (op)cartesian squares, equivalences with explicit inverses, adjunctions,
// external monoidal structure, and involutions.
//
// Every checker is deterministic given (seed, caps): sample i draws from an
// independent generator derived from (seed, i), so reports are reproducible
// and the first violation (lowest sample index) is always the one reported.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "framedkit/dbl.hpp"

namespace framedkit::laws {

using dbl::HCell;
using dbl::Instance;
using dbl::Obj;
using dbl::Square;
using dbl::Vert;
using nlohmann::json;

// Sampling configuration. Caps are chosen so that every universal-property
// check stays exhaustively enumerable within a sample.
struct Sampler {
  std::uint64_t seed = 0;
  std::size_t samples = 200;
  std::size_t maxObj = 5;   // size cap for sampled objects
  std::size_t maxCell = 4;  // size cap for apexes / matrix entries
};

// deterministic per-sample generator
fin::Rng sampleRng(std::uint64_t seed, std::size_t index);

struct LawReport {
  bool pass = true;
  std::string lawName;  // violated law on fail; checker name on pass
  std::size_t sampleCount = 0;
  json witness = json::object();  // serialized offending data on fail
  std::uint64_t seed = 0;
  bool budgetExceeded = false;  // some checks skipped: enumeration too large
  std::vector<std::string> notes;

  std::string summary() const;  // single human-readable line
  json toJson() const;
};

// ---- framed functors ------------------------------------------------------

// Orientation of the comparison squares:
//   Lax, Strong:    compCmp(M,N): F M ⊙ F N ⇒ F(M ⊙ N),  unitCmp(A): U_{F A} ⇒ F(U_A)
//   Oplax, Normal:  compCmp(M,N): F(M ⊙ N) ⇒ F M ⊙ F N,  unitCmp(A): F(U_A) ⇒ U_{F A}
// Strong additionally claims both comparisons invertible; Normal claims the
// unit comparison invertible.
enum class Flavor { Lax, Oplax, Strong, Normal };
bool laxOriented(Flavor f);
std::string flavorName(Flavor f);

struct FramedFunctor {
  const Instance* dom = nullptr;
  const Instance* cod = nullptr;
  std::string name;
  Flavor flavor = Flavor::Strong;
  std::function<Obj(const Obj&)> onObj;
  std::function<Vert(const Vert&)> onVert;
  std::function<HCell(const HCell&)> onCell;
  std::function<Square(const Square&)> onSquare;
  std::function<Square(const HCell&, const HCell&)> compCmp;
  std::function<Square(const Obj&)> unitCmp;
};

FramedFunctor identityFunctor(const Instance&);
// diagrammatic order: apply f, then g (requires f.cod == g.dom)
FramedFunctor composeFunctors(const FramedFunctor& f, const FramedFunctor& g);
// lax-oriented strong presentation of a functor whose comparison squares
// are invertible; throws InputError from the comparisons if one is not
FramedFunctor strengthen(const FramedFunctor& f);

// components of a transformation α: F ⇒ G between functors that share
// domain and codomain
struct FramedTransformation {
  std::string name;
  std::function<Vert(const Obj&)> onObj;      // α_A : F A → G A
  std::function<Square(const HCell&)> onCell; // α_M : F M ⇒ G M over (α_A, α_B)
};

FramedTransformation identityTransformation(const FramedFunctor&);

// ---- axiom suites ----------------------------------------------------------

// category axioms, interchange, coherence (pentagon/triangle), naturality of
// the coherence isos, frame bookkeeping
LawReport checkDoubleAxioms(const Instance&, const Sampler& = {});

// companion/conjoint equations; cartesianness of the restriction witness and
// opcartesianness of the extension witness, certified by exhaustive
// factorization at capped sizes; restrictions represented by
// companion ⊙ M ⊙ conjoint
LawReport checkFramedStructure(const Instance&, const Sampler& = {});

// functoriality, frame equations, naturality and coherence of the comparison
// squares per flavor, preservation of (op)cartesian squares per flavor, and
// recording of observed strength in the notes
LawReport checkFramedFunctor(const FramedFunctor&, const Sampler& = {});

// single-input preservation probes (also used by checkFramedFunctor)
struct PreservationReport {
  bool pass = false;
  std::string detail;
  json witness = json::object();
};
// does F send the cartesian witness of restrict(f, m, g) to a cartesian
// square? decided by invertibility of the canonical comparison
PreservationReport checkCartesianPreservation(const FramedFunctor&, const Vert& f, const HCell& m,
                                              const Vert& g);
PreservationReport checkOpcartesianPreservation(const FramedFunctor&, const Vert& f,
                                                const HCell& m, const Vert& g);

// naturality in vertical arrows and squares plus the two pasting equations
// binding α to the comparison squares of F and G (which must share
// orientation)
LawReport checkFramedTransformation(const FramedTransformation&, const FramedFunctor& F,
                                    const FramedFunctor& G, const Sampler& = {});

// Lowering of a vertical-components transformation to one whose components
// are horizontal 1-cells: onObj(A) is the restriction of the codomain unit
// along (α_A, id), and onCell(M) the unique square F M ⊙ õ_B ⇒ õ_A ⊙ G M
// compatible with the cartesian witnesses.
struct OplaxLowering {
  std::function<HCell(const Obj&)> onObj;
  std::function<Square(const HCell&)> onCell;
};
OplaxLowering lowerToOplax(const FramedTransformation&, const FramedFunctor& F,
                           const FramedFunctor& G);
// the lowered naturality equation, sampled over globular squares
LawReport checkOplaxNaturality(const OplaxLowering&, const FramedFunctor& F,
                               const FramedFunctor& G, const Sampler& = {});

// ---- equivalences ----------------------------------------------------------

// Choices witnessing essential surjectivity: a preimage object with a
// vertical iso for every codomain object, and a preimage 1-cell with a
// square iso for every codomain 1-cell. Empty optionals mean "no choice
// available" and fail the check.
struct EquivalenceChoices {
  std::function<std::optional<Obj>(const Obj&)> objInverse;
  std::function<std::optional<Vert>(const Obj&)> objIso;  // F(A_C) → C
  std::function<std::optional<HCell>(const HCell&)> cellInverse;
  std::function<std::optional<Square>(const HCell&)> cellIso;  // F(M_N) ⇒ N
};

// fullness/faithfulness on vertical arrows and on globular squares
// (exhaustive within samples), strength of F, and completeness of the
// essential-surjectivity choices
LawReport checkEquivalence(const FramedFunctor&, const EquivalenceChoices&, const Sampler& = {});

struct InverseBuild {
  FramedFunctor inverse;         // G with G(C) = A_C, G(N) = M_N
  FramedTransformation unit;     // Id ⇒ G∘F, components in the domain
  FramedTransformation counit;   // F∘G ⇒ Id, components in the codomain
};
// Constructs the inverse functor by reflecting codomain data through the
// choices; every lookup resolves by exhaustive search and throws InputError
// when fullness/faithfulness fails to deliver a unique preimage.
InverseBuild buildInverse(const FramedFunctor&, const EquivalenceChoices&);

// ---- adjunctions ------------------------------------------------------------

// triangle identities for unit/counit, transformation laws for both, and
// invertibility of the left adjoint's comparison squares (with the explicit
// composite built from unit, counit and the right adjoint's comparison
// certified as the inverse)
LawReport checkFramedAdjunction(const FramedFunctor& F, const FramedFunctor& G,
                                const FramedTransformation& unit,
                                const FramedTransformation& counit, const Sampler& = {});

// ---- external monoidal structure --------------------------------------------

struct MonoidalData {
  Obj unitObj;  // I
  std::function<Obj(const Obj&, const Obj&)> prodObj;
  std::function<Vert(const Vert&, const Vert&)> prodVert;
  std::function<HCell(const HCell&, const HCell&)> prodCell;
  std::function<Square(const Square&, const Square&)> prodSquare;
  // (M⊗P) ⊙ (N⊗Q) ⇒ (M⊙N) ⊗ (P⊙Q)
  std::function<Square(const HCell& m, const HCell& p, const HCell& n, const HCell& q)>
      interchange;
  // U_{A⊗B} ⇒ U_A ⊗ U_B
  std::function<Square(const Obj&, const Obj&)> unitIso;
  // vertical monoidal constraints
  std::function<Vert(const Obj&, const Obj&, const Obj&)> assocObj;  // (A⊗B)⊗C → A⊗(B⊗C)
  std::function<Vert(const Obj&)> lunitObj;                          // I⊗A → A
  std::function<Vert(const Obj&)> runitObj;                          // A⊗I → A
  // cell components making the vertical constraints into transformations
  std::function<Square(const HCell&, const HCell&, const HCell&)> assocCell;
  std::function<Square(const HCell&)> lunitCell;  // U_I⊗M ⇒ M
  std::function<Square(const HCell&)> runitCell;  // M⊗U_I ⇒ M
  // symmetry; leave empty when the structure is not claimed symmetric
  std::function<Vert(const Obj&, const Obj&)> symObj;         // A⊗B → B⊗A
  std::function<Square(const HCell&, const HCell&)> symCell;  // M⊗N ⇒ N⊗M
};

LawReport checkMonoidalFramed(const Instance&, const MonoidalData&, const Sampler& = {});

// ---- involutions -------------------------------------------------------------

struct InvolutionData {
  std::function<Obj(const Obj&)> opObj;
  std::function<Vert(const Vert&)> opVert;
  std::function<HCell(const HCell&)> opCell;      // M: A⇸B ↦ Mᵒ: Bᵒ⇸Aᵒ
  std::function<Square(const Square&)> opSquare;  // over (f,g) ↦ over (gᵒ,fᵒ)
  std::function<Square(const HCell&, const HCell&)> compCmp;  // Nᵒ ⊙ Mᵒ ⇒ (M⊙N)ᵒ
  std::function<Square(const Obj&)> unitCmp;                  // U_{Aᵒ} ⇒ (U_A)ᵒ
  std::function<Vert(const Obj&)> xiObj;       // (Aᵒ)ᵒ → A, iso
  std::function<Square(const HCell&)> xiCell;  // (Mᵒ)ᵒ ⇒ M over (ξ, ξ)
};

LawReport checkInvolution(const Instance&, const InvolutionData&, const Sampler& = {});

// ---- small helpers shared with other modules ---------------------------------

// inverse of a vertical iso, located by exhaustive search; throws InputError
// when no two-sided inverse exists
Vert vertInverse(const Instance&, const Vert&);

}  // namespace framedkit::laws
