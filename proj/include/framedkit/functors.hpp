#pragma once

#include "framedkit/laws.hpp"
#include "framedkit/mat.hpp"
#include "framedkit/span.hpp"

namespace framedkit::functors {

using fin::FinFn;
using fin::FinSet;
using laws::FramedFunctor;
using laws::FramedTransformation;
using laws::InvolutionData;
using laws::MonoidalData;

// Sends a span to its underlying relation; identity on objects and
// vertical arrows. Strong: composing spans or their relations first gives
// the same relation.
FramedFunctor relFunctor();

// An endofunctor of finite sets, given pointwise. onSet/onFn are expected
// to preserve identities and composition; the checkers will expose any
// failure.
struct SetFunctor {
  std::string name;
  std::function<FinSet(const FinSet&)> onSet;
  std::function<FinFn(const FinFn&)> onFn;
};

// Applies a set functor to every frame, apex and leg of a span. Oplax in
// general (flavor normal): the canonical comparison points out of the
// composite, F(M⊙N) ⇒ FM⊙FN, and the unit comparison is an identity.
FramedFunctor spanLift(const SetFunctor& f);

// Covariant powerset. Subsets are labeled sub(a;b;…), enumerated in
// bitmask order over the element list; functions act by direct image.
SetFunctor powersetFunctor();

// The function set S→A as a FinSet: labels fn(s1:a1;s2:a2;…), enumerated
// in the order of allFunctions(s, a).
FinSet expSet(const FinSet& s, const FinSet& a);

// X ↦ X×S and X ↦ X^S lifted to spans. Both preserve the pullbacks that
// build span composition, so both are presented as strong functors; they
// form a framed adjunction with the transformations below.
FramedFunctor productFunctor(const FinSet& s);
FramedFunctor exponentialFunctor(const FinSet& s);
FramedTransformation productExpUnit(const FinSet& s);    // Id ⇒ (-×S)^S
FramedTransformation productExpCounit(const FinSet& s);  // (-^S)×S ⇒ Id

// Cartesian product as external tensor, with the structure squares built
// by label surgery so they are the canonical ones.
MonoidalData spanMonoidalData();
MonoidalData matMonoidalData();

// Leg swap / matrix transpose as a horizontal involution.
InvolutionData spanInvolutionData();
InvolutionData matInvolutionData();

}  // namespace framedkit::functors
