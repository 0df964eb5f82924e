#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "framedkit/mat.hpp"

using namespace framedkit;
using fin::FinFn;
using fin::FinSet;
using mat::MatCell;

namespace {

FinSet mkset(const std::string& name, std::vector<std::string> elems) {
  return fin::makeSet(name, std::move(elems));
}

FinFn mkfn(const FinSet& dom, const FinSet& cod,
           const std::vector<std::pair<std::string, std::string>>& map) {
  return FinFn::make(dom, cod, [&](const std::string& x) {
    for (const auto& [k, v] : map)
      if (k == x) return v;
    throw fin::InputError("test map misses " + x);
  });
}

void checkUniversal(const dbl::Instance& inst, const dbl::CartesianWitness& w,
                    const dbl::Square& cand, const dbl::Vert& u, const dbl::Vert& v) {
  auto all = dbl::factorExhaustive(inst, w, cand, u, v);
  REQUIRE(all.size() == 1);
  auto chosen = dbl::factorUniversal(inst, w, cand, u, v);
  REQUIRE(chosen.has_value());
  CHECK(inst.squareEq(*chosen, all[0]));
}

MatCell companionOf(const FinFn& f) {
  return mat::cellOf(mat::matRestrict(f, mat::matUnit(f.cod), FinFn::identity(f.cod)).cell);
}

MatCell conjointOf(const FinFn& f) {
  return mat::cellOf(mat::matRestrict(FinFn::identity(f.cod), mat::matUnit(f.cod), f).cell);
}

}  // namespace

TEST_CASE("matrix multiplication sums over the middle index") {
  FinSet a = mkset("A", {"a"}), b = mkset("B", {"b1", "b2"}), c = mkset("C", {"c"});
  MatCell m = mat::makeMat(a, b, {mkset("", {"m"}), mkset("", {})});
  MatCell n = mat::makeMat(b, c, {mkset("", {"n1", "n2"}), mkset("", {"n"})});
  MatCell comp = mat::matCompose(m, n);
  CHECK(comp.at(0, 0).elems ==
        std::vector<std::string>{"inl_b1(pair(m,n1))", "inl_b1(pair(m,n2))"});
  CHECK_THROWS_AS(mat::matCompose(n, m), fin::InputError);
}

TEST_CASE("diagonal unit matrices") {
  FinSet a = mkset("A", {"a"});
  MatCell u = mat::matUnit(a);
  CHECK(u.at(0, 0).elems == std::vector<std::string>{"star"});
  MatCell empty = mat::matUnit(mkset("E", {}));
  CHECK(empty.entries.empty());

  const dbl::Instance& inst = mat::matInstance();
  FinSet b = mkset("B", {"b1", "b2"});
  MatCell m = mat::makeMat(a, b, {mkset("", {"x", "y"}), mkset("", {"z"})});
  dbl::Square ru = inst.runit(mat::wrapCell(m));
  CHECK(inst.invert(ru).has_value());
  dbl::Square lu = inst.lunit(mat::wrapCell(m));
  CHECK(inst.invert(lu).has_value());
  CHECK(mat::mapsOf(ru)[0].at("inl_b1(pair(x,star))") == "x");
  CHECK(mat::mapsOf(lu)[0].at("inl_a(pair(star,y))") == "y");
}

TEST_CASE("companion matrices compose like their functions") {
  FinSet a = mkset("A", {"a1", "a2"}), b = mkset("B", {"b1", "b2"}), c = mkset("C", {"c"});
  FinFn f = mkfn(a, b, {{"a1", "b2"}, {"a2", "b1"}});
  FinFn g = FinFn::constant(b, c, "c");
  MatCell cf = companionOf(f);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      CHECK(cf.at(i, j).size() == (f.apply(i) == j ? 1u : 0u));
  auto iso = mat::matInstance().findGlobularIso(
      mat::wrapCell(mat::matCompose(cf, companionOf(g))),
      mat::wrapCell(companionOf(f.then(g))));
  CHECK(iso.has_value());
}

TEST_CASE("base change moves entries along the index maps") {
  const dbl::Instance& inst = mat::matInstance();
  FinSet a = mkset("A", {"a1", "a2"}), b = mkset("B", {"b"});
  MatCell m = mat::makeMat(a, b, {mkset("", {"x", "y"}), mkset("", {"z"})});

  dbl::Restriction r = mat::matRestrict(FinFn::identity(a), m, FinFn::identity(b));
  CHECK(mat::cellOf(r.cell) == m);

  FinSet one = mkset("I", {"i"});
  dbl::Extension e = mat::matExtend(FinFn::constant(a, one, "i"), m,
                                    FinFn::constant(b, one, "i"));
  CHECK(mat::cellOf(e.cell).at(0, 0).size() == 3);
  CHECK(mat::cellOf(e.cell).at(0, 0).elems[0] == "inl_pair(a1,b)(x)");

  dbl::Square unit = inst.sqUnit(mat::wrapVert(FinFn::constant(a, one, "i")));
  CHECK(mat::mapsOf(unit).size() == 4);
}

TEST_CASE("transpose and external tensor") {
  FinSet a = mkset("A", {"a1", "a2"}), b = mkset("B", {"b1", "b2", "b3"});
  FinFn f = mkfn(a, b, {{"a1", "b2"}, {"a2", "b2"}});
  CHECK(mat::matTranspose(companionOf(f)) == conjointOf(f));

  MatCell m = mat::makeMat(a, b,
                           {mkset("", {"p"}), mkset("", {}), mkset("", {"q", "r"}),
                            mkset("", {"s"}), mkset("", {"t"}), mkset("", {})});
  CHECK(mat::matTranspose(mat::matTranspose(m)) == m);

  auto iso = mat::matInstance().findGlobularIso(
      mat::wrapCell(mat::matExternalTensor(mat::matUnit(a), mat::matUnit(b))),
      mat::wrapCell(mat::matUnit(fin::product(a, b).apex)));
  CHECK(iso.has_value());
}

TEST_CASE("associator is an invertible label shuffle") {
  const dbl::Instance& inst = mat::matInstance();
  fin::Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    dbl::Obj w = inst.sampleObj(rng, 3), x = inst.sampleObj(rng, 3);
    dbl::Obj y = inst.sampleObj(rng, 3), z = inst.sampleObj(rng, 3);
    dbl::HCell m = inst.sampleHCell(rng, w, x, 2);
    dbl::HCell n = inst.sampleHCell(rng, x, y, 2);
    dbl::HCell p = inst.sampleHCell(rng, y, z, 2);
    dbl::Square as = inst.assoc(m, n, p);
    auto inv = inst.invert(as);
    REQUIRE(inv.has_value());
    CHECK(inst.squareEq(inst.vCompose2(as, *inv), inst.sqId(as.src)));
    CHECK(inst.squareEq(inst.vCompose2(*inv, as), inst.sqId(as.tgt)));
  }
}

TEST_CASE("squares over (f,g) match globular squares into the restriction") {
  const dbl::Instance& inst = mat::matInstance();
  fin::Rng rng(13);
  int done = 0;
  while (done < 10) {
    dbl::Obj a = inst.sampleObj(rng, 2), b = inst.sampleObj(rng, 2);
    dbl::Obj c = inst.sampleObj(rng, 2), d = inst.sampleObj(rng, 2);
    auto f = inst.sampleVert(rng, a, c), g = inst.sampleVert(rng, b, d);
    if (!f || !g) continue;
    dbl::HCell m = inst.sampleHCell(rng, a, b, 2);
    dbl::HCell n = inst.sampleHCell(rng, c, d, 2);
    std::size_t direct = 0, viaRestrict = 0;
    inst.forEachSquare(m, n, *f, *g, [&](const dbl::Square&) {
      ++direct;
      return true;
    });
    dbl::Restriction r = inst.restrictCell(*f, n, *g);
    inst.forEachSquare(m, r.cell, inst.vId(a), inst.vId(b), [&](const dbl::Square&) {
      ++viaRestrict;
      return true;
    });
    CHECK(direct == viaRestrict);
    ++done;
  }
}

TEST_CASE("restriction witnesses satisfy the universal property") {
  const dbl::Instance& inst = mat::matInstance();
  fin::Rng rng(17);
  int done = 0;
  while (done < 10) {
    dbl::Obj a2 = inst.sampleObj(rng, 2), b2 = inst.sampleObj(rng, 2);
    dbl::Obj a1 = inst.sampleObj(rng, 2), b1 = inst.sampleObj(rng, 2);
    dbl::Obj a0 = inst.sampleObj(rng, 2), b0 = inst.sampleObj(rng, 2);
    auto f = inst.sampleVert(rng, a1, a2), g = inst.sampleVert(rng, b1, b2);
    auto u = inst.sampleVert(rng, a0, a1), v = inst.sampleVert(rng, b0, b1);
    if (!f || !g || !u || !v) continue;
    dbl::HCell m = inst.sampleHCell(rng, a2, b2, 2);
    dbl::HCell x = inst.sampleHCell(rng, a0, b0, 2);
    dbl::Restriction r = inst.restrictCell(*f, m, *g);
    dbl::CartesianWitness w{r.cart, false};
    dbl::Vert fu = inst.vCompose(*u, *f), gv = inst.vCompose(*v, *g);
    int cands = 0;
    inst.forEachSquare(x, m, fu, gv, [&](const dbl::Square& cand) {
      checkUniversal(inst, w, cand, *u, *v);
      return ++cands < 6;
    });
    ++done;
  }
}

TEST_CASE("extension witnesses satisfy the universal property") {
  const dbl::Instance& inst = mat::matInstance();
  fin::Rng rng(19);
  int done = 0;
  while (done < 10) {
    dbl::Obj a0 = inst.sampleObj(rng, 2), b0 = inst.sampleObj(rng, 2);
    dbl::Obj a1 = inst.sampleObj(rng, 2), b1 = inst.sampleObj(rng, 2);
    dbl::Obj a2 = inst.sampleObj(rng, 2), b2 = inst.sampleObj(rng, 2);
    auto f = inst.sampleVert(rng, a0, a1), g = inst.sampleVert(rng, b0, b1);
    auto u = inst.sampleVert(rng, a1, a2), v = inst.sampleVert(rng, b1, b2);
    if (!f || !g || !u || !v) continue;
    dbl::HCell m = inst.sampleHCell(rng, a0, b0, 2);
    dbl::HCell y = inst.sampleHCell(rng, a2, b2, 2);
    dbl::Extension e = inst.extendCell(*f, m, *g);
    dbl::CartesianWitness w{e.opcart, true};
    dbl::Vert fu = inst.vCompose(*f, *u), gv = inst.vCompose(*g, *v);
    int cands = 0;
    inst.forEachSquare(m, y, fu, gv, [&](const dbl::Square& cand) {
      checkUniversal(inst, w, cand, *u, *v);
      return ++cands < 6;
    });
    ++done;
  }
}

TEST_CASE("local coequalizers act per entry") {
  const dbl::Instance& inst = mat::matInstance();
  FinSet a = mkset("A", {"a"}), b = mkset("B", {"b"});
  MatCell m = mat::makeMat(a, b, {mkset("", {"x"})});
  MatCell n = mat::makeMat(a, b, {mkset("", {"p", "q", "r"})});
  dbl::Square s1 = mat::wrapSquare(m, n, FinFn::identity(a), FinFn::identity(b),
                                   {FinFn::constant(m.at(0, 0), n.at(0, 0), "p")});
  dbl::Square s2 = mat::wrapSquare(m, n, FinFn::identity(a), FinFn::identity(b),
                                   {FinFn::constant(m.at(0, 0), n.at(0, 0), "q")});
  dbl::LocalCoeq q = inst.localCoequalizer(s1, s2);
  CHECK(mat::cellOf(q.cell).at(0, 0).elems ==
        std::vector<std::string>{"class(p)", "class(r)"});

  MatCell y = mat::makeMat(a, b, {mkset("", {"u", "v"})});
  dbl::Square good = mat::wrapSquare(
      n, y, FinFn::identity(a), FinFn::identity(b),
      {mkfn(n.at(0, 0), y.at(0, 0), {{"p", "u"}, {"q", "u"}, {"r", "v"}})});
  auto desc = inst.factorCoeq(q, good, inst.vId(mat::wrapObj(a)), inst.vId(mat::wrapObj(b)));
  REQUIRE(desc.has_value());
  CHECK(mat::mapsOf(*desc)[0].at("class(p)") == "u");

  dbl::Square bad = mat::wrapSquare(
      n, y, FinFn::identity(a), FinFn::identity(b),
      {mkfn(n.at(0, 0), y.at(0, 0), {{"p", "u"}, {"q", "v"}, {"r", "v"}})});
  CHECK_FALSE(
      inst.factorCoeq(q, bad, inst.vId(mat::wrapObj(a)), inst.vId(mat::wrapObj(b))).has_value());
}
