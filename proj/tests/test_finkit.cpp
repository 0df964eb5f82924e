#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "framedkit/fin.hpp"

using namespace framedkit::fin;

namespace {

FinSet set(std::string name, std::vector<std::string> elems) {
  return makeSet(std::move(name), std::move(elems));
}

// Universal-property oracle: the cone (u,v) over the cospan (f,g) admits
// exactly one mediating map into the claimed apex.
int mediatorCount(const SpanDiagram& pb, const FinFn& u, const FinFn& v) {
  int count = 0;
  forEachFunction(u.dom, pb.apex, [&](const FinFn& m) {
    if (m.then(pb.p1) == u && m.then(pb.p2) == v) ++count;
    return true;
  });
  return count;
}

void checkPullbackUniversal(const FinFn& f, const FinFn& g, const FinSet& z) {
  SpanDiagram pb = pullback(f, g);
  REQUIRE(pb.p1.then(f) == pb.p2.then(g));
  forEachFunction(z, f.dom, [&](const FinFn& u) {
    forEachFunction(z, g.dom, [&](const FinFn& v) {
      if (u.then(f) == v.then(g)) CHECK(mediatorCount(pb, u, v) == 1);
      return true;
    });
    return true;
  });
}

}  // namespace

TEST_CASE("pullback: frozen examples") {
  FinSet A = set("A", {"a1", "a2"});
  FinSet B = set("B", {"b1"});
  FinSet C = set("C", {"c1", "c2"});
  FinFn f = FinFn::make(A, C, [](const std::string& x) { return x == "a1" ? "c1" : "c2"; });
  FinFn g = FinFn::constant(B, C, "c1");

  SpanDiagram pb = pullback(f, g);
  CHECK(pb.apex.elems == std::vector<std::string>{"pair(a1,b1)"});
  CHECK(pb.p1.at("pair(a1,b1)") == "a1");
  CHECK(pb.p2.at("pair(a1,b1)") == "b1");

  // along the identity the apex tabulates the graph of f
  SpanDiagram gr = pullback(f, FinFn::identity(C));
  CHECK(gr.apex.elems == std::vector<std::string>{"pair(a1,c1)", "pair(a2,c2)"});
  CHECK(gr.apex != A);  // fresh set, iso not equality

  // cospan of two collapse maps: full product
  FinSet X = set("X", {"x1", "x2"});
  FinSet Z = set("Z", {"z"});
  FinFn cx = FinFn::constant(X, Z, "z");
  SpanDiagram sq = pullback(cx, cx);
  CHECK(sq.apex.elems == std::vector<std::string>{"pair(x1,x1)", "pair(x1,x2)", "pair(x2,x1)",
                                                  "pair(x2,x2)"});
}

TEST_CASE("pullback: codomain mismatch is an input error") {
  FinSet A = set("A", {"a"});
  FinSet B = set("B", {"b"});
  CHECK_THROWS_AS(pullback(FinFn::identity(A), FinFn::identity(B)), InputError);
}

TEST_CASE("pullback: universal property, exhaustive at small size") {
  FinSet A = set("A", {"a1", "a2", "a3"});
  FinSet B = set("B", {"b1", "b2"});
  FinSet C = set("C", {"c1", "c2"});
  FinSet Z = set("Z", {"z1", "z2"});
  forEachFunction(A, C, [&](const FinFn& f) {
    forEachFunction(B, C, [&](const FinFn& g) {
      checkPullbackUniversal(f, g, Z);
      return true;
    });
    return true;
  });
  // degenerate cones from the empty set
  checkPullbackUniversal(FinFn::constant(A, C, "c1"), FinFn::constant(B, C, "c2"), set("E", {}));
}

TEST_CASE("pullback: pasting two pullback squares gives a pullback") {
  // right square: P1 over (g: B→C, m: M→C); left square: P2 over (p2: P1→B, f: A→B)
  FinSet A = set("A", {"a1", "a2"});
  FinSet B = set("B", {"b1", "b2"});
  FinSet C = set("C", {"c"});
  FinSet M = set("M", {"m1", "m2", "m3"});
  FinFn f = FinFn::make(A, B, [](const std::string& x) { return x == "a1" ? "b1" : "b2"; });
  FinFn g = FinFn::constant(B, C, "c");
  FinFn m = FinFn::constant(M, C, "c");

  SpanDiagram right = pullback(g, m);       // apex over B
  SpanDiagram left = pullback(f, right.p1); // apex over A
  // pasted cone legs: to A and to M
  FinFn toA = left.p1;
  FinFn toM = left.p2.then(right.p2);
  // oracle: compare with the direct pullback of (f.then(g), m)
  SpanDiagram direct = pullback(f.then(g), m);
  CHECK(left.apex.size() == direct.apex.size());
  FinSet Z = set("Z", {"z1", "z2"});
  forEachFunction(Z, A, [&](const FinFn& u) {
    forEachFunction(Z, M, [&](const FinFn& v) {
      if (u.then(f.then(g)) == v.then(m)) {
        int count = 0;
        forEachFunction(Z, left.apex, [&](const FinFn& w) {
          if (w.then(toA) == u && w.then(toM) == v) ++count;
          return true;
        });
        CHECK(count == 1);
      }
      return true;
    });
    return true;
  });
}

TEST_CASE("coequalizer: frozen examples") {
  FinSet D = set("D", {"x", "y"});
  FinSet C = set("C", {"1", "2", "3"});
  FinFn f = FinFn::make(D, C, [](const std::string& x) { return x == "x" ? "1" : "2"; });
  FinFn g = FinFn::make(D, C, [](const std::string& x) { return x == "x" ? "2" : "3"; });
  QuotientMap q = coequalizer(f, g);
  REQUIRE(q.classes.size() == 1);
  CHECK(q.classes[0] == std::vector<std::string>{"1", "2", "3"});
  CHECK(q.quotient().elems == std::vector<std::string>{"class(1)"});

  // equal pair: discrete partition
  QuotientMap qd = coequalizer(f, f);
  CHECK(qd.classes.size() == 3);
  CHECK(qd.projection().bijective());

  // nothing merged
  FinSet D1 = set("D1", {"x"});
  FinSet C1 = set("C1", {"1", "2"});
  FinFn h = FinFn::constant(D1, C1, "1");
  QuotientMap qn = coequalizer(h, h);
  CHECK(qn.classes == std::vector<std::vector<std::string>>{{"1"}, {"2"}});
}

TEST_CASE("coequalizer: shape mismatch is an input error") {
  FinSet A = set("A", {"a"});
  FinSet B = set("B", {"b"});
  CHECK_THROWS_AS(coequalizer(FinFn::identity(A), FinFn::identity(B)), InputError);
}

TEST_CASE("coequalizer: universal property, exhaustive at small size") {
  FinSet D = set("D", {"x", "y"});
  FinSet C = set("C", {"1", "2", "3"});
  FinSet W = set("W", {"w1", "w2"});
  forEachFunction(D, C, [&](const FinFn& f) {
    forEachFunction(D, C, [&](const FinFn& g) {
      QuotientMap q = coequalizer(f, g);
      FinFn proj = q.projection();
      CHECK(f.then(proj) == g.then(proj));
      forEachFunction(C, W, [&](const FinFn& t) {
        if (f.then(t) == g.then(t)) {
          int count = 0;
          forEachFunction(q.quotient(), W, [&](const FinFn& u) {
            if (proj.then(u) == t) ++count;
            return true;
          });
          CHECK(count == 1);
        }
        return true;
      });
      return true;
    });
    return true;
  });
}

TEST_CASE("product and coproduct: frozen examples") {
  FinSet A = set("A", {"a"});
  FinSet B = set("B", {"b1", "b2"});
  CHECK(product(A, B).apex.elems == std::vector<std::string>{"pair(a,b1)", "pair(a,b2)"});
  CHECK(product(A, set("E", {})).apex.empty());

  // diagonal is a section of both projections
  FinSet X = set("X", {"x", "y"});
  SpanDiagram p = product(X, X);
  FinFn diag = FinFn::make(X, p.apex, [](const std::string& x) { return pairLabel(x, x); });
  CHECK(diag.then(p.p1) == FinFn::identity(X));
  CHECK(diag.then(p.p2) == FinFn::identity(X));

  CospanDiagram s = coproduct(A, A);
  CHECK(s.sum.elems == std::vector<std::string>{"inl(a)", "inr(a)"});
  CHECK(coproduct(set("E", {}), B).sum.size() == 2);
  CHECK(coproduct(set("M", {"m"}), set("N", {"n1", "n2"})).sum.size() == 3);
  CHECK(s.i1.injective());
  CHECK(s.i2.injective());
}

TEST_CASE("imageFactorization: frozen examples") {
  FinSet X = set("X", {"x", "y"});
  FinSet T = set("T", {"1", "2"});
  ImageFactorization c = imageFactorization(FinFn::constant(X, T, "1"));
  CHECK(c.image.elems == std::vector<std::string>{"1"});
  CHECK(c.surj.then(c.inj) == FinFn::constant(X, T, "1"));

  FinFn inj = FinFn::make(X, set("T3", {"1", "2", "3"}),
                          [](const std::string& x) { return x == "x" ? "3" : "1"; });
  ImageFactorization ci = imageFactorization(inj);
  CHECK(ci.surj.bijective());
  CHECK(ci.image.elems == std::vector<std::string>{"1", "3"});  // order inherited from cod

  FinSet X3 = set("X3", {"x", "y", "z"});
  FinSet T3 = set("T3", {"1", "2", "3"});
  FinFn h = FinFn::make(X3, T3, [](const std::string& x) { return x == "z" ? "3" : "2"; });
  CHECK(imageFactorization(h).image.elems == std::vector<std::string>{"2", "3"});
}

TEST_CASE("findBijection: deterministic and constraint-driven") {
  FinSet A = set("A", {"1", "2"});
  FinSet B = set("B", {"u", "v"});

  auto r = findBijection(A, B);
  REQUIRE(r.has_value());
  CHECK(r->at("1") == "u");  // order-first tie-break
  CHECK(r->at("2") == "v");
  CHECK(findBijection(A, B) == r);  // deterministic

  CHECK(!findBijection(A, set("B1", {"u"})).has_value());

  // constraint u: X→A, v: X→B forcing 1↦v
  FinSet X = set("X", {"p"});
  FnConstraint force{FinFn::constant(X, A, "1"), FinFn::constant(X, B, "v")};
  auto rf = findBijection(A, B, {force});
  REQUIRE(rf.has_value());
  CHECK(rf->at("1") == "v");
  CHECK(rf->at("2") == "u");

  // outgoing-shape constraint: u: A→Y, v: B→Y
  FinSet Y = set("Y", {"p", "q"});
  FinFn uA = FinFn::make(A, Y, [](const std::string& x) { return x == "1" ? "q" : "p"; });
  FinFn vB = FinFn::make(B, Y, [](const std::string& x) { return x == "u" ? "p" : "q"; });
  auto ro = findBijection(A, B, {{uA, vB}});
  REQUIRE(ro.has_value());
  CHECK(ro->at("1") == "v");
  CHECK(ro->at("2") == "u");

  // unsatisfiable constraints
  FinFn uA2 = FinFn::constant(A, Y, "p");
  FinFn vB2 = FinFn::constant(B, Y, "q");
  CHECK(!findBijection(A, B, {{uA2, vB2}}).has_value());

  // accept filter rejects the first candidateorder
  auto ra = findBijection(A, B, {}, [](const FinFn& f) { return f.at("1") == "v"; });
  REQUIRE(ra.has_value());
  CHECK(ra->at("1") == "v");
}

TEST_CASE("labels: nested structure round-trips") {
  // atoms are comma- and paren-free, so splitting is exact on nested labels
  std::string nested = pairLabel(pairLabel("a", "b"), pairLabel("c", "d"));
  auto outer = splitPair(nested);
  REQUIRE(outer.has_value());
  CHECK(outer->first == "pair(a,b)");
  CHECK(outer->second == "pair(c,d)");
  auto inner = splitPair(outer->first);
  REQUIRE(inner.has_value());
  CHECK(inner->first == "a");
  CHECK(inner->second == "b");
  CHECK(!splitPair("inl(a)").has_value());

  CHECK(stripTag("inl", "inl(pair(a,b))") == std::string("pair(a,b)"));
  CHECK(stripTag("inl_b", taggedLabel("inl_b", "m")) == std::string("m"));
  CHECK(!stripTag("inr", "inl(a)").has_value());
}

TEST_CASE("makeSet rejects duplicates; FinFn::make validates codomain") {
  CHECK_THROWS_AS(set("D", {"a", "a"}), InputError);
  FinSet A = set("A", {"a"});
  FinSet B = set("B", {"b"});
  CHECK_THROWS_AS(FinFn::make(A, B, [](const std::string&) { return "zz"; }), InputError);
}

TEST_CASE("forEachFunction: enumeration order and budget") {
  FinSet A = set("A", {"a1", "a2"});
  FinSet B = set("B", {"0", "1"});
  std::vector<std::string> seen;
  forEachFunction(A, B, [&](const FinFn& f) {
    seen.push_back(f.at("a1") + f.at("a2"));
    return true;
  });
  CHECK(seen == std::vector<std::string>{"00", "01", "10", "11"});
  CHECK(allFunctions(set("E", {}), B).size() == 1);
  CHECK(allFunctions(A, set("E", {})).empty());
  CHECK_THROWS_AS(forEachFunction(A, B, [](const FinFn&) { return true; }, 3), BudgetError);
}
