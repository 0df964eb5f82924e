#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "framedkit/functors.hpp"
#include "framedkit/laws.hpp"
#include "framedkit/mat.hpp"
#include "framedkit/span.hpp"

using namespace framedkit;
using dbl::HCell;
using dbl::Instance;
using dbl::Obj;
using dbl::Square;
using dbl::Vert;
using fin::FinFn;
using fin::FinSet;
using laws::LawReport;
using laws::Sampler;

namespace {

bool hasNote(const LawReport& r, const std::string& text) {
  return std::find(r.notes.begin(), r.notes.end(), text) != r.notes.end();
}

// Delegates everything to the span instance but damages the associator:
// whenever the target apex holds two elements with equal leg images, the
// associator is post-composed with the transposition swapping them. Every
// square stays well-formed and invertible; the coherence equations break.
class SkewedSpan : public Instance {
 public:
  std::string name() const override { return "skewed-span"; }
  bool objEq(const Obj& a, const Obj& b) const override { return S_.objEq(a, b); }
  bool vertEq(const Vert& a, const Vert& b) const override { return S_.vertEq(a, b); }
  bool hcellEq(const HCell& a, const HCell& b) const override { return S_.hcellEq(a, b); }
  bool squareEq(const Square& a, const Square& b) const override { return S_.squareEq(a, b); }
  Vert vId(const Obj& a) const override { return S_.vId(a); }
  Vert vCompose(const Vert& f, const Vert& g) const override { return S_.vCompose(f, g); }
  HCell hUnit(const Obj& a) const override { return S_.hUnit(a); }
  HCell hCompose(const HCell& m, const HCell& n) const override { return S_.hCompose(m, n); }
  Square sqId(const HCell& m) const override { return S_.sqId(m); }
  Square sqUnit(const Vert& f) const override { return S_.sqUnit(f); }
  Square vCompose2(const Square& a, const Square& b) const override {
    return S_.vCompose2(a, b);
  }
  Square hCompose2(const Square& a, const Square& b) const override {
    return S_.hCompose2(a, b);
  }
  Square assoc(const HCell& m, const HCell& n, const HCell& p) const override {
    Square a = S_.assoc(m, n, p);
    const span::SpanCell& t = span::cellOf(a.tgt);
    for (std::size_t i = 0; i < t.apex.size(); ++i)
      for (std::size_t j = i + 1; j < t.apex.size(); ++j)
        if (t.l.apply(i) == t.l.apply(j) && t.r.apply(i) == t.r.apply(j)) {
          FinFn sw = FinFn::identity(t.apex);
          std::swap(sw.tab[i], sw.tab[j]);
          Square tau = span::wrapSquare(t, t, FinFn::identity(t.lf),
                                        FinFn::identity(t.rf), sw);
          return S_.vCompose2(a, tau);
        }
    return a;
  }
  Square lunit(const HCell& m) const override { return S_.lunit(m); }
  Square runit(const HCell& m) const override { return S_.runit(m); }
  std::optional<Square> invert(const Square& a) const override { return S_.invert(a); }
  dbl::Restriction restrictCell(const Vert& f, const HCell& m, const Vert& g) const override {
    return S_.restrictCell(f, m, g);
  }
  dbl::Extension extendCell(const Vert& f, const HCell& m, const Vert& g) const override {
    return S_.extendCell(f, m, g);
  }
  std::optional<Square> factorCart(const Square& cart, const Square& cand, const Vert& u,
                                   const Vert& v) const override {
    return S_.factorCart(cart, cand, u, v);
  }
  std::optional<Square> factorOpcart(const Square& opcart, const Square& cand, const Vert& u,
                                     const Vert& v) const override {
    return S_.factorOpcart(opcart, cand, u, v);
  }
  void forEachSquare(const HCell& src, const HCell& tgt, const Vert& f, const Vert& g,
                     const std::function<bool(const Square&)>& cb) const override {
    S_.forEachSquare(src, tgt, f, g, cb);
  }
  void forEachVert(const Obj& a, const Obj& b,
                   const std::function<bool(const Vert&)>& cb) const override {
    S_.forEachVert(a, b, cb);
  }
  std::optional<Square> findGlobularIso(const HCell& m, const HCell& n) const override {
    return S_.findGlobularIso(m, n);
  }
  dbl::LocalCoeq localCoequalizer(const Square& a, const Square& b) const override {
    return S_.localCoequalizer(a, b);
  }
  std::optional<Square> factorCoeq(const dbl::LocalCoeq& q, const Square& cand, const Vert& u,
                                   const Vert& v) const override {
    return S_.factorCoeq(q, cand, u, v);
  }
  Obj sampleObj(fin::Rng& rng, std::size_t maxSize) const override {
    return S_.sampleObj(rng, maxSize);
  }
  std::optional<Vert> sampleVert(fin::Rng& rng, const Obj& dom, const Obj& cod) const override {
    return S_.sampleVert(rng, dom, cod);
  }
  HCell sampleHCell(fin::Rng& rng, const Obj& lf, const Obj& rf,
                    std::size_t maxSize) const override {
    return S_.sampleHCell(rng, lf, rf, maxSize);
  }
  std::optional<Square> sampleSquare(fin::Rng& rng, const HCell& src, const HCell& tgt,
                                     const Vert& f, const Vert& g) const override {
    return S_.sampleSquare(rng, src, tgt, f, g);
  }
  nlohmann::json objJson(const Obj& a) const override { return S_.objJson(a); }
  nlohmann::json vertJson(const Vert& f) const override { return S_.vertJson(f); }
  nlohmann::json hcellJson(const HCell& m) const override { return S_.hcellJson(m); }
  nlohmann::json squareJson(const Square& q) const override { return S_.squareJson(q); }

 private:
  const Instance& S_ = span::spanInstance();
};

functors::SetFunctor identitySetFunctor() {
  functors::SetFunctor f;
  f.name = "identity";
  f.onSet = [](const FinSet& a) { return a; };
  f.onFn = [](const FinFn& g) { return g; };
  return f;
}

FinSet renamedSet(const FinSet& a) {
  std::vector<std::string> elems;
  elems.reserve(a.size());
  for (const auto& e : a.elems) elems.push_back("r_" + e);
  return fin::makeSet("r_" + a.name, std::move(elems));
}

functors::SetFunctor renameSetFunctor() {
  functors::SetFunctor f;
  f.name = "rename";
  f.onSet = renamedSet;
  f.onFn = [](const FinFn& g) { return FinFn{renamedSet(g.dom), renamedSet(g.cod), g.tab}; };
  return f;
}

functors::SetFunctor prodWith(const FinSet& s) {
  functors::SetFunctor f;
  f.name = "times-" + s.name;
  f.onSet = [s](const FinSet& a) { return fin::product(a, s).apex; };
  f.onFn = [s](const FinFn& g) {
    return FinFn::make(fin::product(g.dom, s).apex, fin::product(g.cod, s).apex,
                       [&g](const std::string& x) {
                         auto p = fin::splitPair(x);
                         return fin::pairLabel(g.at(p->first), p->second);
                       });
  };
  return f;
}

FinFn firstProjection(const FinSet& a, const FinSet& s) {
  return FinFn::make(fin::product(a, s).apex, a,
                     [](const std::string& x) { return fin::splitPair(x)->first; });
}

// components X×S → X, natural in X, between span(-×S) and span(identity)
laws::FramedTransformation projectionTransformation(const FinSet& s,
                                                    const laws::FramedFunctor& F) {
  laws::FramedTransformation t;
  t.name = "first-projection";
  t.onObj = [s](const Obj& a) {
    return span::wrapVert(firstProjection(span::objOf(a), s));
  };
  t.onCell = [s, F](const HCell& mc) {
    const span::SpanCell& m = span::cellOf(mc);
    return span::wrapSquare(span::cellOf(F.onCell(mc)), m, firstProjection(m.lf, s),
                            firstProjection(m.rf, s), firstProjection(m.apex, s));
  };
  return t;
}

// post-compose a vertical component with a transposition of its codomain
Vert skewVert(const Vert& v) {
  const FinFn& f = span::vertOf(v);
  FinFn sw = FinFn::identity(f.cod);
  if (f.cod.size() >= 2) std::swap(sw.tab[0], sw.tab[1]);
  return span::wrapVert(f.then(sw));
}

}  // namespace

TEST_CASE("double-category axioms hold for spans, relations and matrices") {
  for (const Instance* inst :
       {&span::spanInstance(), &span::relInstance(), &mat::matInstance()}) {
    LawReport r = laws::checkDoubleAxioms(*inst, Sampler{0, 40, 4, 3});
    INFO(inst->name(), ": ", r.summary());
    CHECK(r.pass);
  }
}

TEST_CASE("companion, conjoint and cleavage laws hold for spans, relations and matrices") {
  for (const Instance* inst :
       {&span::spanInstance(), &span::relInstance(), &mat::matInstance()}) {
    LawReport r = laws::checkFramedStructure(*inst, Sampler{0, 25, 4, 3});
    INFO(inst->name(), ": ", r.summary());
    CHECK(r.pass);
  }
}

TEST_CASE("a skewed associator is caught, and the witness replays byte-identically") {
  SkewedSpan bad;
  Sampler s{0, 60, 4, 3};
  LawReport r1 = laws::checkDoubleAxioms(bad, s);
  INFO(r1.summary());
  CHECK_FALSE(r1.pass);
  // the unit triangle is the first coherence equation this seed's sample
  // stream feeds a corruptible composite
  CHECK(r1.lawName == "unit-triangle");
  CHECK(r1.witness.contains("sample"));
  LawReport r2 = laws::checkDoubleAxioms(bad, s);
  CHECK(r1.toJson().dump() == r2.toJson().dump());
}

TEST_CASE("the underlying-relation functor is strong and lawful") {
  laws::FramedFunctor R = functors::relFunctor();
  LawReport r = laws::checkFramedFunctor(R, Sampler{1, 25, 4, 3});
  INFO(r.summary());
  CHECK(r.pass);
  CHECK(hasNote(r, "declared flavor: strong"));
  CHECK(hasNote(r, "all comparison squares invertible on samples (strong)"));
}

TEST_CASE("the powerset lift is normal oplax; extensions survive, restrictions do not") {
  laws::FramedFunctor P = functors::spanLift(functors::powersetFunctor());
  CHECK(P.flavor == laws::Flavor::Normal);
  LawReport r = laws::checkFramedFunctor(P, Sampler{2, 20, 2, 3});
  INFO(r.summary());
  CHECK(r.pass);
  CHECK(hasNote(r, "declared flavor: normal"));

  // The composition comparison is genuinely one-way: over a fat composite
  // (two apex elements on each side of a single shared frame point) direct
  // images identify distinct subsets of the composite apex.
  FinSet zs = fin::makeSet("Z", {"z"});
  span::SpanCell mfat = span::makeSpan(zs, zs, fin::makeSet("M", {"m1", "m2"}),
                                       FinFn::constant(fin::makeSet("M", {"m1", "m2"}), zs, "z"),
                                       FinFn::constant(fin::makeSet("M", {"m1", "m2"}), zs, "z"));
  span::SpanCell nfat = span::makeSpan(zs, zs, fin::makeSet("N", {"n1", "n2"}),
                                       FinFn::constant(fin::makeSet("N", {"n1", "n2"}), zs, "z"),
                                       FinFn::constant(fin::makeSet("N", {"n1", "n2"}), zs, "z"));
  Square cmp = P.compCmp(span::wrapCell(mfat), span::wrapCell(nfat));
  CHECK_FALSE(span::spanInstance().invert(cmp).has_value());
  Square ucmp = P.unitCmp(span::wrapObj(zs));
  CHECK(span::spanInstance().invert(ucmp).has_value());

  const Instance& S = span::spanInstance();
  Obj x = span::wrapObj(fin::makeSet("X", {"x1", "x2"}));
  Obj y = span::wrapObj(fin::makeSet("Y", {"y1", "y2"}));
  Obj z = span::wrapObj(fin::makeSet("Z", {"z"}));
  Vert f = span::wrapVert(FinFn::constant(span::objOf(x), span::objOf(z), "z"));
  Vert g = span::wrapVert(FinFn::constant(span::objOf(y), span::objOf(z), "z"));
  HCell uz = S.hUnit(z);

  // extensions push out of the cell's frames: pick sections Z → X, Z → Y
  Vert fo = span::wrapVert(FinFn::constant(span::objOf(z), span::objOf(x), "x1"));
  Vert go = span::wrapVert(FinFn::constant(span::objOf(z), span::objOf(y), "y1"));
  laws::PreservationReport good = laws::checkOpcartesianPreservation(P, fo, uz, go);
  INFO(good.detail);
  CHECK(good.pass);

  laws::PreservationReport badp = laws::checkCartesianPreservation(P, f, uz, g);
  CHECK_FALSE(badp.pass);
  REQUIRE(badp.witness.contains("imageOfRestriction"));
  // P(X ×_Z Y) has all 16 subsets of a 4-element set; the restriction of
  // P(U_Z) only the 10 pairs (S,T) with S,T simultaneously empty or not
  CHECK(badp.witness["imageOfRestriction"]["apex"]["elements"].size() == 16);
  CHECK(badp.witness["restrictionOfImage"]["apex"]["elements"].size() == 10);

  // the relation functor, by contrast, preserves the same restriction
  laws::FramedFunctor R = functors::relFunctor();
  CHECK(laws::checkCartesianPreservation(R, f, uz, g).pass);
}

TEST_CASE("product and exponential lifts are strong") {
  FinSet s = fin::makeSet("S", {"s1", "s2"});
  laws::FramedFunctor F = functors::productFunctor(s);
  laws::FramedFunctor G = functors::exponentialFunctor(s);
  CHECK(F.flavor == laws::Flavor::Strong);
  CHECK(G.flavor == laws::Flavor::Strong);
  LawReport rf = laws::checkFramedFunctor(F, Sampler{3, 10, 2, 2});
  INFO(rf.summary());
  CHECK(rf.pass);
  CHECK(hasNote(rf, "all comparison squares invertible on samples (strong)"));
  LawReport rg = laws::checkFramedFunctor(G, Sampler{3, 8, 2, 2});
  INFO(rg.summary());
  CHECK(rg.pass);
  CHECK(hasNote(rg, "all comparison squares invertible on samples (strong)"));
}

TEST_CASE("a natural family of projections is a lawful transformation") {
  FinSet s = fin::makeSet("S", {"s1", "s2"});
  laws::FramedFunctor F = functors::spanLift(prodWith(s));
  laws::FramedFunctor G = functors::spanLift(identitySetFunctor());
  laws::FramedTransformation t = projectionTransformation(s, F);
  LawReport r = laws::checkFramedTransformation(t, F, G, Sampler{4, 20, 3, 2});
  INFO(r.summary());
  CHECK(r.pass);

  laws::FramedTransformation skew = t;
  skew.onObj = [inner = t.onObj](const Obj& a) { return skewVert(inner(a)); };
  LawReport rb = laws::checkFramedTransformation(skew, F, G, Sampler{4, 20, 3, 2});
  INFO(rb.summary());
  CHECK_FALSE(rb.pass);
  CHECK(rb.lawName == "transformation-frames");
  CHECK(rb.witness.contains("sample"));
}

TEST_CASE("vertical transformations lower to oplax ones") {
  FinSet s = fin::makeSet("S", {"s1", "s2"});
  laws::FramedFunctor F = functors::spanLift(prodWith(s));
  laws::FramedFunctor G = functors::spanLift(identitySetFunctor());
  laws::FramedTransformation t = projectionTransformation(s, F);
  laws::OplaxLowering low = laws::lowerToOplax(t, F, G);
  LawReport r = laws::checkOplaxNaturality(low, F, G, Sampler{5, 12, 3, 2});
  INFO(r.summary());
  CHECK(r.pass);

  laws::FramedTransformation idt = laws::identityTransformation(G);
  laws::OplaxLowering lid = laws::lowerToOplax(idt, G, G);
  LawReport r2 = laws::checkOplaxNaturality(lid, G, G, Sampler{5, 12, 3, 2});
  INFO(r2.summary());
  CHECK(r2.pass);
}

TEST_CASE("the identity is an equivalence; the relation functor is not faithful") {
  const Instance& S = span::spanInstance();
  laws::FramedFunctor idF = laws::identityFunctor(S);
  laws::EquivalenceChoices idc;
  idc.objInverse = [](const Obj& c) { return std::optional<Obj>(c); };
  idc.objIso = [&S](const Obj& c) { return std::optional<Vert>(S.vId(c)); };
  idc.cellInverse = [](const HCell& n) { return std::optional<HCell>(n); };
  idc.cellIso = [&S](const HCell& n) { return std::optional<Square>(S.sqId(n)); };
  LawReport r = laws::checkEquivalence(idF, idc, Sampler{6, 8, 3, 2});
  INFO(r.summary());
  CHECK(r.pass);

  laws::FramedFunctor R = functors::relFunctor();
  laws::EquivalenceChoices rc;
  rc.objInverse = [](const Obj& c) { return std::optional<Obj>(c); };
  rc.objIso = [](const Obj& c) {
    return std::optional<Vert>(span::relInstance().vId(c));
  };
  rc.cellInverse = [](const HCell& n) {
    const span::Relation& rel = span::relOf(n);
    std::vector<std::string> elems;
    for (const auto& [a, b] : rel.pairs) elems.push_back(fin::pairLabel(a, b));
    FinSet apex = fin::makeSet("graph", std::move(elems));
    FinFn l = FinFn::make(apex, rel.lf,
                          [](const std::string& x) { return fin::splitPair(x)->first; });
    FinFn rr = FinFn::make(apex, rel.rf,
                           [](const std::string& x) { return fin::splitPair(x)->second; });
    return std::optional<HCell>(
        span::wrapCell(span::makeSpan(rel.lf, rel.rf, apex, std::move(l), std::move(rr))));
  };
  rc.cellIso = [](const HCell& n) {
    const span::Relation& rel = span::relOf(n);
    return std::optional<Square>(
        span::relSquare(rel, rel, FinFn::identity(rel.lf), FinFn::identity(rel.rf)));
  };
  LawReport rr = laws::checkEquivalence(R, rc, Sampler{6, 20, 3, 3});
  INFO(rr.summary());
  CHECK_FALSE(rr.pass);
  CHECK(rr.lawName == "globular-faithfulness");
}

TEST_CASE("an inverse can be assembled for a relabeling equivalence") {
  laws::FramedFunctor F = laws::strengthen(functors::spanLift(renameSetFunctor()));
  const Instance& S = span::spanInstance();
  laws::EquivalenceChoices ch;
  auto strip = [](const FinSet& renamed, const FinSet& base) {
    return FinFn::make(renamed, base, [](const std::string& x) { return x.substr(2); });
  };
  ch.objInverse = [](const Obj& c) { return std::optional<Obj>(c); };
  ch.objIso = [strip](const Obj& c) {
    const FinSet& cs = span::objOf(c);
    return std::optional<Vert>(span::wrapVert(strip(renamedSet(cs), cs)));
  };
  ch.cellInverse = [](const HCell& n) { return std::optional<HCell>(n); };
  ch.cellIso = [strip](const HCell& n) {
    const span::SpanCell& sc = span::cellOf(n);
    span::SpanCell fsc{renamedSet(sc.lf), renamedSet(sc.rf), renamedSet(sc.apex),
                       FinFn{renamedSet(sc.apex), renamedSet(sc.lf), sc.l.tab},
                       FinFn{renamedSet(sc.apex), renamedSet(sc.rf), sc.r.tab}};
    return std::optional<Square>(span::wrapSquare(fsc, sc, strip(fsc.lf, sc.lf),
                                                  strip(fsc.rf, sc.rf),
                                                  strip(fsc.apex, sc.apex)));
  };

  LawReport re = laws::checkEquivalence(F, ch, Sampler{7, 10, 3, 2});
  INFO(re.summary());
  CHECK(re.pass);

  laws::InverseBuild ib = laws::buildInverse(F, ch);
  Sampler s{7, 8, 3, 2};
  LawReport ru = laws::checkFramedTransformation(
      ib.unit, laws::identityFunctor(S), laws::composeFunctors(F, ib.inverse), s);
  INFO(ru.summary());
  CHECK(ru.pass);
  LawReport rc = laws::checkFramedTransformation(
      ib.counit, laws::composeFunctors(ib.inverse, F), laws::identityFunctor(S), s);
  INFO(rc.summary());
  CHECK(rc.pass);
}

TEST_CASE("product is left adjoint to exponential as framed functors") {
  FinSet s = fin::makeSet("S", {"s1", "s2"});
  laws::FramedFunctor F = functors::productFunctor(s);
  laws::FramedFunctor G = functors::exponentialFunctor(s);
  laws::FramedTransformation eta = functors::productExpUnit(s);
  laws::FramedTransformation eps = functors::productExpCounit(s);
  LawReport r = laws::checkFramedAdjunction(F, G, eta, eps, Sampler{8, 6, 2, 2});
  INFO(r.summary());
  CHECK(r.pass);

  laws::FramedTransformation bad = eps;
  bad.onObj = [inner = eps.onObj](const Obj& c) { return skewVert(inner(c)); };
  LawReport rb = laws::checkFramedAdjunction(F, G, eta, bad, Sampler{8, 6, 2, 2});
  INFO(rb.summary());
  CHECK_FALSE(rb.pass);
  CHECK(rb.lawName == "counit transformation-frames");
}

TEST_CASE("cartesian product is a symmetric monoidal structure on spans") {
  LawReport r = laws::checkMonoidalFramed(span::spanInstance(), functors::spanMonoidalData(),
                                          Sampler{9, 20, 3, 3});
  INFO(r.summary());
  CHECK(r.pass);
  CHECK(hasNote(r, "symmetric"));
}

TEST_CASE("cartesian product is a symmetric monoidal structure on matrices") {
  LawReport r = laws::checkMonoidalFramed(mat::matInstance(), functors::matMonoidalData(),
                                          Sampler{10, 12, 2, 2});
  INFO(r.summary());
  CHECK(r.pass);
  CHECK(hasNote(r, "symmetric"));
}

TEST_CASE("leg swap and matrix transpose are strict involutions") {
  LawReport r1 = laws::checkInvolution(span::spanInstance(), functors::spanInvolutionData(),
                                       Sampler{11, 20, 3, 3});
  INFO(r1.summary());
  CHECK(r1.pass);
  CHECK(hasNote(r1, "xi components are identities on all samples (strict)"));
  LawReport r2 = laws::checkInvolution(mat::matInstance(), functors::matInvolutionData(),
                                       Sampler{12, 12, 3, 3});
  INFO(r2.summary());
  CHECK(r2.pass);
  CHECK(hasNote(r2, "xi components are identities on all samples (strict)"));
}

TEST_CASE("vertical inverses are found exactly when they exist") {
  const Instance& S = span::spanInstance();
  FinSet a = fin::makeSet("A", {"a1", "a2"});
  FinSet b = fin::makeSet("B", {"b1", "b2"});
  Vert f = span::wrapVert(
      FinFn::make(a, b, [](const std::string& x) { return x == "a1" ? "b2" : "b1"; }));
  Vert g = laws::vertInverse(S, f);
  CHECK(S.vertEq(S.vCompose(f, g), S.vId(span::wrapObj(a))));
  CHECK(S.vertEq(S.vCompose(g, f), S.vId(span::wrapObj(b))));
  CHECK_THROWS_AS(laws::vertInverse(S, span::wrapVert(FinFn::constant(a, b, "b1"))),
                  fin::InputError);
}

TEST_CASE("powerset and function-set constructions enumerate in a stable order") {
  functors::SetFunctor P = functors::powersetFunctor();
  FinSet a = fin::makeSet("A", {"x", "y"});
  FinSet pa = P.onSet(a);
  REQUIRE(pa.size() == 4);
  CHECK(pa.elems[0] == fin::taggedLabel("sub", ""));
  CHECK(pa.elems[1] == fin::taggedLabel("sub", "x"));
  CHECK(pa.elems[3] == fin::taggedLabel("sub", "x;y"));
  FinFn f = FinFn::constant(a, a, "y");
  FinFn pf = P.onFn(f);
  CHECK(pf.apply(0) == 0);  // direct image of the empty subset is empty
  CHECK(pf.apply(1) == 2);  // {x} lands on {y}
  CHECK(pf.apply(3) == 2);  // {x,y} lands on {y}

  CHECK(functors::expSet(a, a).size() == 4);
  FinSet one = fin::makeSet("I", {"pt"});
  CHECK(functors::expSet(a, one).size() == 1);
  CHECK(functors::expSet(one, a).size() == 2);
}
