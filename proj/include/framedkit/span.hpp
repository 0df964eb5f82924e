#pragma once

#include "framedkit/dbl.hpp"

namespace framedkit::span {

using fin::FinFn;
using fin::FinSet;

// A horizontal 1-cell A⇸B: a set with a leg into each frame.
struct SpanCell {
  FinSet lf, rf;
  FinSet apex;
  FinFn l, r;

  friend bool operator==(const SpanCell& a, const SpanCell& b) {
    return a.lf == b.lf && a.rf == b.rf && a.apex == b.apex && a.l == b.l && a.r == b.r;
  }
};

SpanCell makeSpan(FinSet lf, FinSet rf, FinSet apex, FinFn l, FinFn r);
SpanCell spanUnit(const FinSet& a);
SpanCell spanCompose(const SpanCell& m, const SpanCell& n);
SpanCell spanInvolute(const SpanCell& m);
SpanCell externalProduct(const SpanCell& m, const SpanCell& n);
SpanCell graphSpan(const FinFn& f);   // A ←id A →f B
SpanCell cographSpan(const FinFn& f); // B ←f A →id A

struct Relation {
  FinSet lf, rf;
  std::vector<std::pair<std::string, std::string>> pairs;  // sorted, deduplicated

  bool contains(const std::string& a, const std::string& b) const;
  friend bool operator==(const Relation& x, const Relation& y) {
    return x.lf == y.lf && x.rf == y.rf && x.pairs == y.pairs;
  }
};

Relation toRelation(const SpanCell& m);
Relation relCompose(const Relation& m, const Relation& n);
Relation relUnit(const FinSet& a);

// chosen cleavage, also reachable through the instance
dbl::Restriction spanRestrict(const FinFn& f, const SpanCell& m, const FinFn& g);
dbl::Extension spanExtend(const FinFn& f, const SpanCell& m, const FinFn& g);

// the instance objects; stateless, safe to share
const dbl::Instance& spanInstance();
const dbl::Instance& relInstance();

// payload accessors for code layered on top of the instances
dbl::Obj wrapObj(FinSet a);
dbl::Vert wrapVert(FinFn f);
dbl::HCell wrapCell(SpanCell m);
dbl::Square wrapSquare(SpanCell src, SpanCell tgt, FinFn f, FinFn g, FinFn h);
const FinSet& objOf(const dbl::Obj&);
const FinFn& vertOf(const dbl::Vert&);
const SpanCell& cellOf(const dbl::HCell&);
const FinFn& mapOf(const dbl::Square&);  // the apex map

dbl::HCell wrapRel(Relation r);
const Relation& relOf(const dbl::HCell&);
// Rel is thin: a square over (f,g) exists iff (a,b)∈src implies (fa,gb)∈tgt
dbl::Square relSquare(Relation src, Relation tgt, FinFn f, FinFn g);

}  // namespace framedkit::span
