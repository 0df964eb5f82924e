#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "framedkit/mat.hpp"
#include "framedkit/span.hpp"

using namespace framedkit;
using dbl::HCell;
using dbl::HTree;
using dbl::Instance;
using dbl::Obj;
using dbl::Square;
using dbl::Vert;

namespace {

struct Sampled {
  Obj a, b, c, d;
  HCell m, n, p;
  // m: a⇸b, n: b⇸c, p: c⇸d
};

Sampled sampleChain(const Instance& inst, fin::Rng& rng) {
  Sampled s;
  s.a = inst.sampleObj(rng, 3);
  s.b = inst.sampleObj(rng, 3);
  s.c = inst.sampleObj(rng, 3);
  s.d = inst.sampleObj(rng, 3);
  s.m = inst.sampleHCell(rng, s.a, s.b, 3);
  s.n = inst.sampleHCell(rng, s.b, s.c, 3);
  s.p = inst.sampleHCell(rng, s.c, s.d, 3);
  return s;
}

void companionEquations(const Instance& inst, std::uint64_t seed) {
  fin::Rng rng(seed);
  int done = 0;
  while (done < 10) {
    Obj a = inst.sampleObj(rng, 4), b = inst.sampleObj(rng, 4);
    auto f = inst.sampleVert(rng, a, b);
    if (!f) continue;
    dbl::CompanionData cd = dbl::companionConjoint(inst, *f);
    Square uf = inst.sqUnit(*f);

    CHECK(inst.squareEq(inst.vCompose2(cd.compFromUnit, cd.compToUnit), uf));
    CHECK(inst.squareEq(inst.vCompose2(cd.conjFromUnit, cd.conjToUnit), uf));

    Square mid = inst.hCompose2(cd.compFromUnit, cd.compToUnit);
    auto li = inst.invert(inst.lunit(cd.companion));
    REQUIRE(li.has_value());
    Square tri = inst.vCompose2(inst.vCompose2(*li, mid), inst.runit(cd.companion));
    CHECK(inst.squareEq(tri, inst.sqId(cd.companion)));

    Square mid2 = inst.hCompose2(cd.conjToUnit, cd.conjFromUnit);
    auto ri = inst.invert(inst.runit(cd.conjoint));
    REQUIRE(ri.has_value());
    Square tri2 = inst.vCompose2(inst.vCompose2(*ri, mid2), inst.lunit(cd.conjoint));
    CHECK(inst.squareEq(tri2, inst.sqId(cd.conjoint)));
    ++done;
  }
}

void pentagonAndTriangle(const Instance& inst, std::uint64_t seed) {
  fin::Rng rng(seed);
  for (int i = 0; i < 8; ++i) {
    Sampled s = sampleChain(inst, rng);
    Obj e = inst.sampleObj(rng, 3);
    HCell q = inst.sampleHCell(rng, s.d, e, 3);

    Square p1 = inst.vCompose2(inst.assoc(inst.hCompose(s.m, s.n), s.p, q),
                               inst.assoc(s.m, s.n, inst.hCompose(s.p, q)));
    Square p2 = inst.vCompose2(
        inst.vCompose2(inst.hCompose2(inst.assoc(s.m, s.n, s.p), inst.sqId(q)),
                       inst.assoc(s.m, inst.hCompose(s.n, s.p), q)),
        inst.hCompose2(inst.sqId(s.m), inst.assoc(s.n, s.p, q)));
    CHECK(inst.squareEq(p1, p2));

    HCell ub = inst.hUnit(s.b);
    Square t1 = inst.vCompose2(inst.assoc(s.m, ub, s.n),
                               inst.hCompose2(inst.sqId(s.m), inst.lunit(s.n)));
    Square t2 = inst.hCompose2(inst.runit(s.m), inst.sqId(s.n));
    CHECK(inst.squareEq(t1, t2));
  }
}

void naturality(const Instance& inst, std::uint64_t seed) {
  fin::Rng rng(seed);
  int done = 0;
  while (done < 8) {
    Sampled x = sampleChain(inst, rng);
    Sampled y = sampleChain(inst, rng);
    auto f = inst.sampleVert(rng, x.a, y.a), g = inst.sampleVert(rng, x.b, y.b);
    auto h = inst.sampleVert(rng, x.c, y.c), k = inst.sampleVert(rng, x.d, y.d);
    if (!f || !g || !h || !k) continue;
    auto al = inst.sampleSquare(rng, x.m, y.m, *f, *g);
    auto be = inst.sampleSquare(rng, x.n, y.n, *g, *h);
    auto ga = inst.sampleSquare(rng, x.p, y.p, *h, *k);
    if (!al || !be || !ga) continue;
    Square lhs = inst.vCompose2(inst.assoc(x.m, x.n, x.p),
                                inst.hCompose2(*al, inst.hCompose2(*be, *ga)));
    Square rhs = inst.vCompose2(inst.hCompose2(inst.hCompose2(*al, *be), *ga),
                                inst.assoc(y.m, y.n, y.p));
    CHECK(inst.squareEq(lhs, rhs));

    Square ul = inst.vCompose2(inst.lunit(x.m), *al);
    Square ur = inst.vCompose2(inst.hCompose2(inst.sqUnit(*f), *al), inst.lunit(y.m));
    CHECK(inst.squareEq(ul, ur));
    ++done;
  }
}

void restrictionRepresented(const Instance& inst, std::uint64_t seed) {
  fin::Rng rng(seed);
  int done = 0;
  while (done < 6) {
    Obj a = inst.sampleObj(rng, 3), b = inst.sampleObj(rng, 3);
    Obj c = inst.sampleObj(rng, 3), d = inst.sampleObj(rng, 3);
    auto f = inst.sampleVert(rng, a, c), g = inst.sampleVert(rng, b, d);
    if (!f || !g) continue;
    HCell m = inst.sampleHCell(rng, c, d, 3);
    dbl::BcoReport rep = dbl::bcObjectsRepresent(inst, *f, m, *g);
    CHECK(rep.pass);
    ++done;
  }
}

void coherePlanner(const Instance& inst, std::uint64_t seed) {
  fin::Rng rng(seed);
  for (int i = 0; i < 5; ++i) {
    Sampled s = sampleChain(inst, rng);
    HTree lm = HTree::leaf(s.m), ln = HTree::leaf(s.n), lp = HTree::leaf(s.p);

    Square vAssoc = dbl::cohere(inst, (lm * ln) * lp, lm * (ln * lp));
    CHECK(inst.squareEq(vAssoc, inst.assoc(s.m, s.n, s.p)));

    Square vLunit = dbl::cohere(inst, HTree::unit(s.a) * lm, lm);
    CHECK(inst.squareEq(vLunit, inst.lunit(s.m)));

    Square vRunit = dbl::cohere(inst, lm * HTree::unit(s.b), lm);
    CHECK(inst.squareEq(vRunit, inst.runit(s.m)));

    // a messier pair of shapes around the same three cells
    HTree from = (HTree::unit(s.a) * lm) * (ln * (lp * HTree::unit(s.d)));
    HTree to = ((lm * ln) * lp) * HTree::unit(s.d);
    Square z = dbl::cohere(inst, from, to);
    CHECK(dbl::globular(inst, z));
    CHECK(inst.invert(z).has_value());

    // round trip is the identity
    Square back = dbl::cohere(inst, to, from);
    CHECK(inst.squareEq(inst.vCompose2(z, back), inst.sqId(dbl::evalTree(inst, from))));
  }
}

}  // namespace

TEST_CASE("companions and conjoints satisfy the unit and counit equations") {
  companionEquations(span::spanInstance(), 21);
  companionEquations(mat::matInstance(), 22);
}

TEST_CASE("pentagon and unit triangle hold for the chosen coherence cells") {
  pentagonAndTriangle(span::spanInstance(), 31);
  pentagonAndTriangle(mat::matInstance(), 32);
}

TEST_CASE("coherence cells are natural in all three arguments") {
  naturality(span::spanInstance(), 41);
  naturality(mat::matInstance(), 42);
}

TEST_CASE("restriction is represented by companion and conjoint") {
  restrictionRepresented(span::spanInstance(), 51);
  restrictionRepresented(mat::matInstance(), 52);
}

TEST_CASE("the pasting planner reproduces the chosen coherence cells") {
  coherePlanner(span::spanInstance(), 61);
  coherePlanner(mat::matInstance(), 62);
}

TEST_CASE("the span companion is the graph span") {
  const Instance& inst = span::spanInstance();
  fin::FinSet a = fin::makeSet("A", {"a1", "a2", "a3"});
  fin::FinSet b = fin::makeSet("B", {"b1", "b2"});
  fin::FinFn f = fin::FinFn::make(a, b, [](const std::string& x) {
    return x == "a2" ? "b2" : "b1";
  });
  dbl::CompanionData cd = dbl::companionConjoint(inst, span::wrapVert(f));
  CHECK(inst.findGlobularIso(cd.companion, span::wrapCell(span::graphSpan(f))).has_value());
  CHECK(inst.findGlobularIso(cd.conjoint, span::wrapCell(span::cographSpan(f))).has_value());

  // extension along (id, f) gives the companion up to iso as well
  dbl::Extension e = span::spanExtend(fin::FinFn::identity(a), span::spanUnit(a), f);
  CHECK(inst.findGlobularIso(cd.companion, e.cell).has_value());
}
