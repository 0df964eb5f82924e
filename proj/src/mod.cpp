#include "framedkit/mod.hpp"

#include <algorithm>
#include <any>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "framedkit/span.hpp"

namespace framedkit::mod {

using dbl::json;
using fin::BudgetError;
using fin::InputError;

namespace {

// ---------------------------------------------------------------------------
// payload plumbing
// ---------------------------------------------------------------------------

template <typename T>
const T& unwrapAny(const std::any& v, const char* what) {
  const T* p = std::any_cast<T>(&v);
  if (!p) throw InputError(std::string("expected ") + what + " payload");
  return *p;
}

dbl::Obj oW(MonoidData a) { return dbl::Obj{std::move(a)}; }

dbl::Vert vW(MonoidHom h) {
  dbl::Obj dom = oW(h.dom), cod = oW(h.cod);
  return dbl::Vert{std::move(h), std::move(dom), std::move(cod)};
}

dbl::HCell hW(BimoduleData m) {
  dbl::Obj lf = oW(m.left), rf = oW(m.right);
  return dbl::HCell{std::move(m), std::move(lf), std::move(rf)};
}

dbl::Square sW(EquivariantMap e) {
  dbl::HCell src = hW(e.src), tgt = hW(e.tgt);
  dbl::Vert la = vW(e.lh), ra = vW(e.rh);
  return dbl::Square{std::move(e), std::move(src), std::move(tgt), std::move(la), std::move(ra)};
}

dbl::Square requireInvert(const dbl::Instance& d, const dbl::Square& s, const char* what) {
  auto i = d.invert(s);
  if (!i) throw InputError(std::string(what) + ": the square is not invertible");
  return *i;
}

dbl::Square requireFactor(std::optional<dbl::Square> s, const char* what) {
  if (!s) throw InputError(std::string(what) + ": the factorization does not exist");
  return *std::move(s);
}

// ---------------------------------------------------------------------------
// equality helpers
// ---------------------------------------------------------------------------

bool monEq(const dbl::Instance& d, const MonoidData& a, const MonoidData& b) {
  return d.objEq(a.base, b.base) && d.hcellEq(a.carrier, b.carrier) &&
         d.squareEq(a.unit, b.unit) && d.squareEq(a.mult, b.mult);
}

bool homEq(const dbl::Instance& d, const MonoidHom& f, const MonoidHom& g) {
  return monEq(d, f.dom, g.dom) && monEq(d, f.cod, g.cod) && d.vertEq(f.f, g.f) &&
         d.squareEq(f.map, g.map);
}

bool bimEq(const dbl::Instance& d, const BimoduleData& m, const BimoduleData& n) {
  return monEq(d, m.left, n.left) && monEq(d, m.right, n.right) && d.hcellEq(m.cell, n.cell) &&
         d.squareEq(m.actL, n.actL) && d.squareEq(m.actR, n.actR);
}

bool homIsId(const dbl::Instance& d, const MonoidHom& h) {
  return d.vertEq(h.f, d.vId(h.dom.base)) && d.squareEq(h.map, d.sqId(h.dom.carrier));
}

// the two equations making a square of bimodules equivariant
bool equivariantLaws(const dbl::Instance& d, const EquivariantMap& e) {
  dbl::Square lhsL = d.vCompose2(d.hCompose2(e.lh.map, e.map), e.tgt.actL);
  dbl::Square rhsL = d.vCompose2(e.src.actL, e.map);
  if (!d.squareEq(lhsL, rhsL)) return false;
  dbl::Square lhsR = d.vCompose2(d.hCompose2(e.map, e.rh.map), e.tgt.actR);
  dbl::Square rhsR = d.vCompose2(e.src.actR, e.map);
  return d.squareEq(lhsR, rhsR);
}

bool equivariantOk(const dbl::Instance& d, const EquivariantMap& e) {
  try {
    return equivariantLaws(d, e);
  } catch (const InputError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// witness serialization
// ---------------------------------------------------------------------------

json monoidJson(const dbl::Instance& d, const MonoidData& a) {
  return json{{"base", d.objJson(a.base)},
              {"carrier", d.hcellJson(a.carrier)},
              {"unit", d.squareJson(a.unit)},
              {"mult", d.squareJson(a.mult)}};
}

json homJson(const dbl::Instance& d, const MonoidHom& h) {
  return json{{"arrow", d.vertJson(h.f)}, {"map", d.squareJson(h.map)}};
}

json bimoduleJson(const dbl::Instance& d, const BimoduleData& m) {
  return json{{"left", monoidJson(d, m.left)},
              {"right", monoidJson(d, m.right)},
              {"cell", d.hcellJson(m.cell)},
              {"actLeft", d.squareJson(m.actL)},
              {"actRight", d.squareJson(m.actR)}};
}

json equivariantJson(const dbl::Instance& d, const EquivariantMap& e) {
  return json{{"src", bimoduleJson(d, e.src)},
              {"tgt", bimoduleJson(d, e.tgt)},
              {"leftHom", homJson(d, e.lh)},
              {"rightHom", homJson(d, e.rh)},
              {"map", d.squareJson(e.map)}};
}

}  // namespace

// ---------------------------------------------------------------------------
// constructions
// ---------------------------------------------------------------------------

MonoidData unitMonoid(const dbl::Instance& d, const dbl::Obj& r) {
  dbl::HCell u = d.hUnit(r);
  dbl::Square unit = d.sqId(u);
  dbl::Square mult = d.lunit(u);
  return MonoidData{r, std::move(u), std::move(unit), std::move(mult)};
}

MonoidHom idHom(const dbl::Instance& d, const MonoidData& a) {
  return MonoidHom{a, a, d.vId(a.base), d.sqId(a.carrier)};
}

MonoidHom composeHom(const dbl::Instance& d, const MonoidHom& f, const MonoidHom& g) {
  if (!monEq(d, f.cod, g.dom))
    throw InputError("homomorphism composition: the middle monoids differ");
  return MonoidHom{f.dom, g.cod, d.vCompose(f.f, g.f), d.vCompose2(f.map, g.map)};
}

BimoduleData unitBimodule(const dbl::Instance& d, const MonoidData& a) {
  (void)d;
  return BimoduleData{a, a, a.carrier, a.mult, a.mult, std::nullopt};
}

BimoduleData freeBimodule(const dbl::Instance& d, const MonoidData& a, const dbl::HCell& x,
                          const MonoidData& b) {
  if (!d.objEq(x.lf, a.base) || !d.objEq(x.rf, b.base))
    throw InputError("free bimodule: the generating cell does not sit between the monoid bases");
  const dbl::HCell &A = a.carrier, &B = b.carrier;
  dbl::HCell AX = d.hCompose(A, x);
  dbl::HCell cell = d.hCompose(AX, B);
  // left action: A⊙((A⊙X)⊙B) ⇒ (A⊙(A⊙X))⊙B ⇒ ((A⊙A)⊙X)⊙B ⇒ (A⊙X)⊙B
  dbl::Square k1 = requireInvert(d, d.assoc(A, AX, B), "free bimodule");
  dbl::Square inner = d.vCompose2(requireInvert(d, d.assoc(A, A, x), "free bimodule"),
                                  d.hCompose2(a.mult, d.sqId(x)));
  dbl::Square actL = d.vCompose2(k1, d.hCompose2(inner, d.sqId(B)));
  // right action: ((A⊙X)⊙B)⊙B ⇒ (A⊙X)⊙(B⊙B) ⇒ (A⊙X)⊙B
  dbl::Square actR = d.vCompose2(d.assoc(AX, B, B), d.hCompose2(d.sqId(AX), b.mult));
  return BimoduleData{a, b, std::move(cell), std::move(actL), std::move(actR), x};
}

// ---------------------------------------------------------------------------
// validity
// ---------------------------------------------------------------------------

laws::LawReport checkMonoid(const dbl::Instance& d, const MonoidData& a) {
  laws::LawReport rep;
  rep.lawName = "monoid";
  auto fail = [&](const std::string& law, json w) {
    rep.pass = false;
    rep.lawName = law;
    rep.witness = std::move(w);
    return rep;
  };
  try {
    if (!d.objEq(a.carrier.lf, a.base) || !d.objEq(a.carrier.rf, a.base))
      return fail("monoid-frames",
                  json{{"carrier", d.hcellJson(a.carrier)}, {"base", d.objJson(a.base)}});
    dbl::HCell u = d.hUnit(a.base);
    dbl::Vert idv = d.vId(a.base);
    if (!d.hcellEq(a.unit.src, u) || !d.hcellEq(a.unit.tgt, a.carrier) ||
        !d.vertEq(a.unit.la, idv) || !d.vertEq(a.unit.ra, idv))
      return fail("monoid-unit-frames", d.squareJson(a.unit));
    dbl::HCell aa = d.hCompose(a.carrier, a.carrier);
    if (!d.hcellEq(a.mult.src, aa) || !d.hcellEq(a.mult.tgt, a.carrier) ||
        !d.vertEq(a.mult.la, idv) || !d.vertEq(a.mult.ra, idv))
      return fail("monoid-mult-frames", d.squareJson(a.mult));
    dbl::Square lhs = d.vCompose2(d.hCompose2(a.mult, d.sqId(a.carrier)), a.mult);
    dbl::Square rhs = d.vCompose2(d.assoc(a.carrier, a.carrier, a.carrier),
                                  d.vCompose2(d.hCompose2(d.sqId(a.carrier), a.mult), a.mult));
    if (!d.squareEq(lhs, rhs))
      return fail("monoid-associativity",
                  json{{"viaLeft", d.squareJson(lhs)}, {"viaRight", d.squareJson(rhs)}});
    dbl::Square lu = d.vCompose2(d.hCompose2(a.unit, d.sqId(a.carrier)), a.mult);
    if (!d.squareEq(lu, d.lunit(a.carrier)))
      return fail("monoid-left-unit", json{{"viaUnit", d.squareJson(lu)}});
    dbl::Square ru = d.vCompose2(d.hCompose2(d.sqId(a.carrier), a.unit), a.mult);
    if (!d.squareEq(ru, d.runit(a.carrier)))
      return fail("monoid-right-unit", json{{"viaUnit", d.squareJson(ru)}});
  } catch (const InputError& e) {
    return fail("exception", json{{"error", e.what()}});
  }
  return rep;
}

laws::LawReport checkMonoidHom(const dbl::Instance& d, const MonoidHom& h) {
  laws::LawReport rep;
  rep.lawName = "monoid-homomorphism";
  auto fail = [&](const std::string& law, json w) {
    rep.pass = false;
    rep.lawName = law;
    rep.witness = std::move(w);
    return rep;
  };
  try {
    if (!d.vertEq(h.map.la, h.f) || !d.vertEq(h.map.ra, h.f) ||
        !d.hcellEq(h.map.src, h.dom.carrier) || !d.hcellEq(h.map.tgt, h.cod.carrier))
      return fail("homomorphism-frames", homJson(d, h));
    dbl::Square lhsU = d.vCompose2(h.dom.unit, h.map);
    dbl::Square rhsU = d.vCompose2(d.sqUnit(h.f), h.cod.unit);
    if (!d.squareEq(lhsU, rhsU))
      return fail("homomorphism-unit",
                  json{{"viaDomain", d.squareJson(lhsU)}, {"viaCodomain", d.squareJson(rhsU)}});
    dbl::Square lhsM = d.vCompose2(h.dom.mult, h.map);
    dbl::Square rhsM = d.vCompose2(d.hCompose2(h.map, h.map), h.cod.mult);
    if (!d.squareEq(lhsM, rhsM))
      return fail("homomorphism-mult",
                  json{{"viaDomain", d.squareJson(lhsM)}, {"viaCodomain", d.squareJson(rhsM)}});
  } catch (const InputError& e) {
    return fail("exception", json{{"error", e.what()}});
  }
  return rep;
}

laws::LawReport checkBimodule(const dbl::Instance& d, const BimoduleData& m) {
  laws::LawReport rep;
  rep.lawName = "bimodule";
  auto fail = [&](const std::string& law, json w) {
    rep.pass = false;
    rep.lawName = law;
    rep.witness = std::move(w);
    return rep;
  };
  try {
    if (!d.objEq(m.cell.lf, m.left.base) || !d.objEq(m.cell.rf, m.right.base))
      return fail("bimodule-frames", bimoduleJson(d, m));
    const dbl::HCell &A = m.left.carrier, &B = m.right.carrier, &M = m.cell;
    dbl::Vert idl = d.vId(m.left.base), idr = d.vId(m.right.base);
    if (!d.hcellEq(m.actL.src, d.hCompose(A, M)) || !d.hcellEq(m.actL.tgt, M) ||
        !d.vertEq(m.actL.la, idl) || !d.vertEq(m.actL.ra, idr))
      return fail("bimodule-left-action-frames", d.squareJson(m.actL));
    if (!d.hcellEq(m.actR.src, d.hCompose(M, B)) || !d.hcellEq(m.actR.tgt, M) ||
        !d.vertEq(m.actR.la, idl) || !d.vertEq(m.actR.ra, idr))
      return fail("bimodule-right-action-frames", d.squareJson(m.actR));
    // unit laws
    dbl::Square lu = d.vCompose2(d.hCompose2(m.left.unit, d.sqId(M)), m.actL);
    if (!d.squareEq(lu, d.lunit(M)))
      return fail("bimodule-left-unit", json{{"viaAction", d.squareJson(lu)}});
    dbl::Square ru = d.vCompose2(d.hCompose2(d.sqId(M), m.right.unit), m.actR);
    if (!d.squareEq(ru, d.runit(M)))
      return fail("bimodule-right-unit", json{{"viaAction", d.squareJson(ru)}});
    // associativity of each action
    dbl::Square laL = d.vCompose2(d.hCompose2(m.left.mult, d.sqId(M)), m.actL);
    dbl::Square laR = d.vCompose2(d.assoc(A, A, M),
                                  d.vCompose2(d.hCompose2(d.sqId(A), m.actL), m.actL));
    if (!d.squareEq(laL, laR))
      return fail("bimodule-left-associativity",
                  json{{"viaMult", d.squareJson(laL)}, {"viaAction", d.squareJson(laR)}});
    dbl::Square raL = d.vCompose2(d.hCompose2(m.actR, d.sqId(B)), m.actR);
    dbl::Square raR = d.vCompose2(d.assoc(M, B, B),
                                  d.vCompose2(d.hCompose2(d.sqId(M), m.right.mult), m.actR));
    if (!d.squareEq(raL, raR))
      return fail("bimodule-right-associativity",
                  json{{"viaAction", d.squareJson(raL)}, {"viaMult", d.squareJson(raR)}});
    // the two actions commute
    dbl::Square cL = d.vCompose2(d.hCompose2(m.actL, d.sqId(B)), m.actR);
    dbl::Square cR = d.vCompose2(d.assoc(A, M, B),
                                 d.vCompose2(d.hCompose2(d.sqId(A), m.actR), m.actL));
    if (!d.squareEq(cL, cR))
      return fail("bimodule-action-commutation",
                  json{{"leftThenRight", d.squareJson(cL)}, {"rightThenLeft", d.squareJson(cR)}});
  } catch (const InputError& e) {
    return fail("exception", json{{"error", e.what()}});
  }
  return rep;
}

laws::LawReport checkEquivariant(const dbl::Instance& d, const EquivariantMap& e) {
  laws::LawReport rep;
  rep.lawName = "equivariant-map";
  auto fail = [&](const std::string& law, json w) {
    rep.pass = false;
    rep.lawName = law;
    rep.witness = std::move(w);
    return rep;
  };
  try {
    if (!monEq(d, e.lh.dom, e.src.left) || !monEq(d, e.lh.cod, e.tgt.left) ||
        !monEq(d, e.rh.dom, e.src.right) || !monEq(d, e.rh.cod, e.tgt.right) ||
        !d.hcellEq(e.map.src, e.src.cell) || !d.hcellEq(e.map.tgt, e.tgt.cell) ||
        !d.vertEq(e.map.la, e.lh.f) || !d.vertEq(e.map.ra, e.rh.f))
      return fail("equivariant-frames", equivariantJson(d, e));
    dbl::Square lhsL = d.vCompose2(d.hCompose2(e.lh.map, e.map), e.tgt.actL);
    dbl::Square rhsL = d.vCompose2(e.src.actL, e.map);
    if (!d.squareEq(lhsL, rhsL))
      return fail("equivariant-left",
                  json{{"actThenMap", d.squareJson(rhsL)}, {"mapThenAct", d.squareJson(lhsL)}});
    dbl::Square lhsR = d.vCompose2(d.hCompose2(e.map, e.rh.map), e.tgt.actR);
    dbl::Square rhsR = d.vCompose2(e.src.actR, e.map);
    if (!d.squareEq(lhsR, rhsR))
      return fail("equivariant-right",
                  json{{"actThenMap", d.squareJson(rhsR)}, {"mapThenAct", d.squareJson(lhsR)}});
  } catch (const InputError& ex) {
    return fail("exception", json{{"error", ex.what()}});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// tensor over a monoid
// ---------------------------------------------------------------------------

TensorResult tensorOverMonoid(const dbl::Instance& d, const BimoduleData& m,
                              const BimoduleData& n) {
  if (!monEq(d, m.right, n.left))
    throw InputError("tensor over a monoid: the middle monoids differ");
  const dbl::HCell &M = m.cell, &N = n.cell, &B = m.right.carrier;
  // coequalize the two middle actions (M⊙B)⊙N ⇒ M⊙N
  dbl::Square s1 = d.hCompose2(m.actR, d.sqId(N));
  dbl::Square s2 = d.vCompose2(d.assoc(M, B, N), d.hCompose2(d.sqId(M), n.actL));
  dbl::LocalCoeq q = d.localCoequalizer(s1, s2);
  dbl::Vert idl = d.vId(M.lf), idr = d.vId(N.rf);
  // outer left action by descent along A⊙proj
  const dbl::HCell& A = m.left.carrier;
  dbl::Square pa = d.hCompose2(d.sqId(A), q.proj);
  dbl::Square candL =
      d.vCompose2(d.vCompose2(requireInvert(d, d.assoc(A, M, N), "tensor over a monoid"),
                              d.hCompose2(m.actL, d.sqId(N))),
                  q.proj);
  dbl::Square actL =
      requireFactor(d.factorCoeq(dbl::LocalCoeq{pa.tgt, pa}, candL, idl, idr),
                    "tensor over a monoid: left action descent");
  // outer right action by descent along proj⊙C
  const dbl::HCell& C = n.right.carrier;
  dbl::Square pc = d.hCompose2(q.proj, d.sqId(C));
  dbl::Square candR = d.vCompose2(
      d.vCompose2(d.assoc(M, N, C), d.hCompose2(d.sqId(M), n.actR)), q.proj);
  dbl::Square actR =
      requireFactor(d.factorCoeq(dbl::LocalCoeq{pc.tgt, pc}, candR, idl, idr),
                    "tensor over a monoid: right action descent");
  BimoduleData out{m.left, n.right, q.cell, std::move(actL), std::move(actR), std::nullopt};
  return TensorResult{std::move(out), q.proj};
}

EquivariantMap composeEquivariant(const dbl::Instance& d, const EquivariantMap& a,
                                  const EquivariantMap& b) {
  if (!homEq(d, a.rh, b.lh))
    throw InputError("equivariant composition: the middle homomorphisms differ");
  TensorResult sp = tensorOverMonoid(d, a.src, b.src);
  TensorResult tp = tensorOverMonoid(d, a.tgt, b.tgt);
  // map the representatives, project, and descend through the source tensor
  dbl::Square c = d.vCompose2(d.hCompose2(a.map, b.map), tp.proj);
  dbl::Square under =
      requireFactor(d.factorCoeq(dbl::LocalCoeq{sp.proj.tgt, sp.proj}, c, a.lh.f, b.rh.f),
                    "equivariant composition: descent to the tensor");
  return EquivariantMap{std::move(sp.bimodule), std::move(tp.bimodule), a.lh, b.rh,
                        std::move(under)};
}

BimoduleRestriction restrictBimodule(const dbl::Instance& d, const MonoidHom& phi,
                                     const BimoduleData& m, const MonoidHom& psi) {
  if (!monEq(d, phi.cod, m.left) || !monEq(d, psi.cod, m.right))
    throw InputError("bimodule restriction: the homomorphisms do not land in the bimodule's "
                     "monoids");
  dbl::Restriction r = d.restrictCell(phi.f, m.cell, psi.f);
  dbl::Vert idl = d.vId(r.cell.lf), idr = d.vId(r.cell.rf);
  // actions induced through the cartesian square
  dbl::Square candL = d.vCompose2(d.hCompose2(phi.map, r.cart), m.actL);
  dbl::Square actL = requireFactor(d.factorCart(r.cart, candL, idl, idr),
                                   "bimodule restriction: left action");
  dbl::Square candR = d.vCompose2(d.hCompose2(r.cart, psi.map), m.actR);
  dbl::Square actR = requireFactor(d.factorCart(r.cart, candR, idl, idr),
                                   "bimodule restriction: right action");
  BimoduleData rb{phi.dom, psi.dom, r.cell, std::move(actL), std::move(actR), std::nullopt};
  EquivariantMap cart{rb, m, phi, psi, r.cart};
  return BimoduleRestriction{std::move(rb), std::move(cart)};
}

// ---------------------------------------------------------------------------
// the module double category
// ---------------------------------------------------------------------------

const MonoidData& monoidOf(const dbl::Obj& a) { return unwrapAny<MonoidData>(a.v, "monoid"); }
const MonoidHom& homOf(const dbl::Vert& f) {
  return unwrapAny<MonoidHom>(f.v, "monoid homomorphism");
}
const BimoduleData& bimoduleOf(const dbl::HCell& m) {
  return unwrapAny<BimoduleData>(m.v, "bimodule");
}
const EquivariantMap& equivariantOf(const dbl::Square& s) {
  return unwrapAny<EquivariantMap>(s.v, "equivariant map");
}

dbl::Obj wrapMonoid(const dbl::Instance& base, MonoidData a) {
  laws::LawReport r = checkMonoid(base, a);
  if (!r.pass) throw InputError("monoid data rejected: " + r.lawName);
  return oW(std::move(a));
}

dbl::Vert wrapHom(const dbl::Instance& base, MonoidHom h) {
  laws::LawReport r = checkMonoidHom(base, h);
  if (!r.pass) throw InputError("homomorphism data rejected: " + r.lawName);
  return vW(std::move(h));
}

dbl::HCell wrapBimodule(const dbl::Instance& base, BimoduleData m) {
  laws::LawReport r = checkBimodule(base, m);
  if (!r.pass) throw InputError("bimodule data rejected: " + r.lawName);
  return hW(std::move(m));
}

dbl::Square wrapEquivariant(const dbl::Instance& base, EquivariantMap e) {
  laws::LawReport r = checkEquivariant(base, e);
  if (!r.pass) throw InputError("equivariant map data rejected: " + r.lawName);
  return sW(std::move(e));
}

namespace {

class ModInstance final : public dbl::Instance {
 public:
  ModInstance(const dbl::Instance& base, MonoidSampler sampler)
      : base_(base), sampler_(std::move(sampler)), name_("mod-" + base.name()) {}

  std::string name() const override { return name_; }

  bool objEq(const dbl::Obj& a, const dbl::Obj& b) const override {
    return monEq(base_, monoidOf(a), monoidOf(b));
  }
  bool vertEq(const dbl::Vert& f, const dbl::Vert& g) const override {
    return homEq(base_, homOf(f), homOf(g));
  }
  bool hcellEq(const dbl::HCell& m, const dbl::HCell& n) const override {
    return bimEq(base_, bimoduleOf(m), bimoduleOf(n));
  }
  bool squareEq(const dbl::Square& a, const dbl::Square& b) const override {
    const EquivariantMap &x = equivariantOf(a), &y = equivariantOf(b);
    return homEq(base_, x.lh, y.lh) && homEq(base_, x.rh, y.rh) &&
           base_.squareEq(x.map, y.map);
  }

  dbl::Vert vId(const dbl::Obj& a) const override { return vW(idHom(base_, monoidOf(a))); }

  dbl::Vert vCompose(const dbl::Vert& f, const dbl::Vert& g) const override {
    return vW(composeHom(base_, homOf(f), homOf(g)));
  }

  dbl::HCell hUnit(const dbl::Obj& a) const override {
    return hW(unitBimodule(base_, monoidOf(a)));
  }

  dbl::HCell hCompose(const dbl::HCell& m, const dbl::HCell& n) const override {
    return hW(tensorOverMonoid(base_, bimoduleOf(m), bimoduleOf(n)).bimodule);
  }

  dbl::Square sqId(const dbl::HCell& m) const override {
    const BimoduleData& mm = bimoduleOf(m);
    return sW(EquivariantMap{mm, mm, idHom(base_, mm.left), idHom(base_, mm.right),
                             base_.sqId(mm.cell)});
  }

  dbl::Square sqUnit(const dbl::Vert& f) const override {
    const MonoidHom& h = homOf(f);
    return sW(EquivariantMap{unitBimodule(base_, h.dom), unitBimodule(base_, h.cod), h, h,
                             h.map});
  }

  dbl::Square vCompose2(const dbl::Square& a, const dbl::Square& b) const override {
    const EquivariantMap &x = equivariantOf(a), &y = equivariantOf(b);
    if (!bimEq(base_, x.tgt, y.src))
      throw InputError("vertical composition: target and source bimodules differ");
    return sW(EquivariantMap{x.src, y.tgt, composeHom(base_, x.lh, y.lh),
                             composeHom(base_, x.rh, y.rh), base_.vCompose2(x.map, y.map)});
  }

  dbl::Square hCompose2(const dbl::Square& a, const dbl::Square& b) const override {
    return sW(composeEquivariant(base_, equivariantOf(a), equivariantOf(b)));
  }

  dbl::Square assoc(const dbl::HCell& m, const dbl::HCell& n,
                    const dbl::HCell& p) const override {
    const BimoduleData &mm = bimoduleOf(m), &nn = bimoduleOf(n), &pp = bimoduleOf(p);
    TensorResult t1 = tensorOverMonoid(base_, mm, nn);
    TensorResult t11 = tensorOverMonoid(base_, t1.bimodule, pp);
    TensorResult t2 = tensorOverMonoid(base_, nn, pp);
    TensorResult t22 = tensorOverMonoid(base_, mm, t2.bimodule);
    dbl::Vert idl = base_.vId(mm.cell.lf), idr = base_.vId(pp.cell.rf);
    // ((M⊙N)⊙P ⇒ M⊙(N⊙P) ⇒ M⊙Q2 ⇒ R), then descend twice
    dbl::Square cand = base_.vCompose2(
        base_.vCompose2(base_.assoc(mm.cell, nn.cell, pp.cell),
                        base_.hCompose2(base_.sqId(mm.cell), t2.proj)),
        t22.proj);
    dbl::Square p1 = base_.hCompose2(t1.proj, base_.sqId(pp.cell));
    dbl::Square c1 =
        requireFactor(base_.factorCoeq(dbl::LocalCoeq{p1.tgt, p1}, cand, idl, idr),
                      "tensor associator: inner descent");
    dbl::Square under = requireFactor(
        base_.factorCoeq(dbl::LocalCoeq{t11.proj.tgt, t11.proj}, c1, idl, idr),
        "tensor associator: outer descent");
    return sW(EquivariantMap{t11.bimodule, t22.bimodule, idHom(base_, mm.left),
                             idHom(base_, pp.right), std::move(under)});
  }

  dbl::Square lunit(const dbl::HCell& m) const override {
    const BimoduleData& mm = bimoduleOf(m);
    TensorResult t = tensorOverMonoid(base_, unitBimodule(base_, mm.left), mm);
    dbl::Square under = requireFactor(
        base_.factorCoeq(dbl::LocalCoeq{t.proj.tgt, t.proj}, mm.actL,
                         base_.vId(mm.cell.lf), base_.vId(mm.cell.rf)),
        "tensor left unitor");
    return sW(EquivariantMap{t.bimodule, mm, idHom(base_, mm.left), idHom(base_, mm.right),
                             std::move(under)});
  }

  dbl::Square runit(const dbl::HCell& m) const override {
    const BimoduleData& mm = bimoduleOf(m);
    TensorResult t = tensorOverMonoid(base_, mm, unitBimodule(base_, mm.right));
    dbl::Square under = requireFactor(
        base_.factorCoeq(dbl::LocalCoeq{t.proj.tgt, t.proj}, mm.actR,
                         base_.vId(mm.cell.lf), base_.vId(mm.cell.rf)),
        "tensor right unitor");
    return sW(EquivariantMap{t.bimodule, mm, idHom(base_, mm.left), idHom(base_, mm.right),
                             std::move(under)});
  }

  std::optional<dbl::Square> invert(const dbl::Square& s) const override {
    const EquivariantMap& e = equivariantOf(s);
    auto mi = base_.invert(e.map);
    if (!mi) return std::nullopt;
    auto li = invertHom(e.lh), ri = invertHom(e.rh);
    if (!li || !ri) return std::nullopt;
    return sW(EquivariantMap{e.tgt, e.src, *li, *ri, *mi});
  }

  dbl::Restriction restrictCell(const dbl::Vert& f, const dbl::HCell& m,
                                const dbl::Vert& g) const override {
    BimoduleRestriction r = restrictBimodule(base_, homOf(f), bimoduleOf(m), homOf(g));
    return dbl::Restriction{hW(r.bimodule), sW(r.cart)};
  }

  dbl::Extension extendCell(const dbl::Vert& f, const dbl::HCell& m,
                            const dbl::Vert& g) const override {
    const MonoidHom &phi = homOf(f), &psi = homOf(g);
    const BimoduleData& mm = bimoduleOf(m);
    if (!monEq(base_, phi.dom, mm.left) || !monEq(base_, psi.dom, mm.right))
      throw InputError("bimodule extension: the homomorphisms must start at the bimodule's "
                       "monoids");
    // the extension is B ⊙ M ⊙ D with B pulled back on the right by phi and
    // D pulled back on the left by psi
    BimoduleRestriction conj =
        restrictBimodule(base_, idHom(base_, phi.cod), unitBimodule(base_, phi.cod), phi);
    BimoduleRestriction comp =
        restrictBimodule(base_, psi, unitBimodule(base_, psi.cod), idHom(base_, psi.cod));
    TensorResult t1 = tensorOverMonoid(base_, conj.bimodule, mm);
    TensorResult t2 = tensorOverMonoid(base_, t1.bimodule, comp.bimodule);
    // unit sections of the two restrictions
    dbl::Square candL = base_.vCompose2(base_.sqUnit(phi.f), phi.cod.unit);
    dbl::Square etaL = requireFactor(
        base_.factorCart(conj.cart.map, candL, phi.f, base_.vId(phi.dom.base)),
        "bimodule extension: left unit section");
    dbl::Square candR = base_.vCompose2(base_.sqUnit(psi.f), psi.cod.unit);
    dbl::Square etaR = requireFactor(
        base_.factorCart(comp.cart.map, candR, base_.vId(psi.dom.base), psi.f),
        "bimodule extension: right unit section");
    // M ⇒ U⊙M ⇒ conj⊙M ⇒ Q1, then M ⇒ M⊙U ⇒ Q1⊙comp ⇒ Q2
    dbl::Square a1 =
        base_.vCompose2(requireInvert(base_, base_.lunit(mm.cell), "bimodule extension"),
                        base_.hCompose2(etaL, base_.sqId(mm.cell)));
    dbl::Square a2 = base_.vCompose2(a1, t1.proj);
    dbl::Square a3 =
        base_.vCompose2(requireInvert(base_, base_.runit(mm.cell), "bimodule extension"),
                        base_.hCompose2(a2, etaR));
    dbl::Square opc = base_.vCompose2(a3, t2.proj);
    return dbl::Extension{hW(t2.bimodule),
                          sW(EquivariantMap{mm, t2.bimodule, phi, psi, std::move(opc)})};
  }

  // Factorization in the module category means: the unique equivariant
  // square with the required composite. When the witness's underlying square
  // is itself universal in the base, the base solver settles it; otherwise
  // (extensions are quotients, so their underlying squares rarely are) the
  // equivariant squares are searched directly.
  std::optional<dbl::Square> factorCart(const dbl::Square& cart, const dbl::Square& cand,
                                        const dbl::Vert& u, const dbl::Vert& v) const override {
    const EquivariantMap &w = equivariantOf(cart), &c = equivariantOf(cand);
    const MonoidHom &uh = homOf(u), &vh = homOf(v);
    if (auto chi = base_.factorCart(w.map, c.map, uh.f, vh.f)) {
      // the base factorization is unique, so it either is a map of
      // bimodules or no factorization exists
      EquivariantMap e{c.src, w.src, uh, vh, *chi};
      if (!equivariantOk(base_, e)) return std::nullopt;
      return sW(std::move(e));
    }
    std::vector<dbl::Square> hits;
    base_.forEachSquare(c.src.cell, w.src.cell, uh.f, vh.f, [&](const dbl::Square& chi) {
      if (!base_.squareEq(base_.vCompose2(chi, w.map), c.map)) return true;
      if (!equivariantOk(base_, EquivariantMap{c.src, w.src, uh, vh, chi})) return true;
      hits.push_back(chi);
      return hits.size() < 2;
    });
    if (hits.size() != 1) return std::nullopt;
    return sW(EquivariantMap{c.src, w.src, uh, vh, hits[0]});
  }

  std::optional<dbl::Square> factorOpcart(const dbl::Square& opcart, const dbl::Square& cand,
                                          const dbl::Vert& u,
                                          const dbl::Vert& v) const override {
    const EquivariantMap &w = equivariantOf(opcart), &c = equivariantOf(cand);
    const MonoidHom &uh = homOf(u), &vh = homOf(v);
    if (auto chi = base_.factorOpcart(w.map, c.map, uh.f, vh.f)) {
      EquivariantMap e{w.tgt, c.tgt, uh, vh, *chi};
      if (!equivariantOk(base_, e)) return std::nullopt;
      return sW(std::move(e));
    }
    std::vector<dbl::Square> hits;
    base_.forEachSquare(w.tgt.cell, c.tgt.cell, uh.f, vh.f, [&](const dbl::Square& chi) {
      if (!base_.squareEq(base_.vCompose2(w.map, chi), c.map)) return true;
      if (!equivariantOk(base_, EquivariantMap{w.tgt, c.tgt, uh, vh, chi})) return true;
      hits.push_back(chi);
      return hits.size() < 2;
    });
    if (hits.size() != 1) return std::nullopt;
    return sW(EquivariantMap{w.tgt, c.tgt, uh, vh, hits[0]});
  }

  void forEachSquare(const dbl::HCell& src, const dbl::HCell& tgt, const dbl::Vert& f,
                     const dbl::Vert& g,
                     const std::function<bool(const dbl::Square&)>& cb) const override {
    const BimoduleData &sm = bimoduleOf(src), &tm = bimoduleOf(tgt);
    const MonoidHom &fh = homOf(f), &gh = homOf(g);
    bool stop = false;
    base_.forEachSquare(sm.cell, tm.cell, fh.f, gh.f, [&](const dbl::Square& s) {
      EquivariantMap e{sm, tm, fh, gh, s};
      if (!equivariantOk(base_, e)) return true;
      if (!cb(sW(std::move(e)))) {
        stop = true;
        return false;
      }
      return true;
    });
    (void)stop;
  }

  void forEachVert(const dbl::Obj& a, const dbl::Obj& b,
                   const std::function<bool(const dbl::Vert&)>& cb) const override {
    forEachHom(monoidOf(a), monoidOf(b),
               [&](MonoidHom h) { return cb(vW(std::move(h))); });
  }

  std::optional<dbl::Square> findGlobularIso(const dbl::HCell& m,
                                             const dbl::HCell& n) const override {
    const BimoduleData &mm = bimoduleOf(m), &nn = bimoduleOf(n);
    if (!monEq(base_, mm.left, nn.left) || !monEq(base_, mm.right, nn.right))
      return std::nullopt;
    std::optional<dbl::Square> out;
    base_.forEachSquare(mm.cell, nn.cell, base_.vId(mm.cell.lf), base_.vId(mm.cell.rf),
                        [&](const dbl::Square& s) {
                          if (!base_.invert(s)) return true;
                          EquivariantMap e{mm, nn, idHom(base_, mm.left),
                                           idHom(base_, mm.right), s};
                          if (!equivariantOk(base_, e)) return true;
                          out = sW(std::move(e));
                          return false;
                        });
    return out;
  }

  dbl::LocalCoeq localCoequalizer(const dbl::Square& a, const dbl::Square& b) const override {
    const EquivariantMap &x = equivariantOf(a), &y = equivariantOf(b);
    dbl::LocalCoeq q0 = base_.localCoequalizer(x.map, y.map);
    const BimoduleData& n = x.tgt;
    dbl::Vert idl = base_.vId(n.cell.lf), idr = base_.vId(n.cell.rf);
    // actions descend to the quotient
    dbl::Square pa = base_.hCompose2(base_.sqId(n.left.carrier), q0.proj);
    dbl::Square actL = requireFactor(
        base_.factorCoeq(dbl::LocalCoeq{pa.tgt, pa}, base_.vCompose2(n.actL, q0.proj), idl,
                         idr),
        "local coequalizer of bimodules: left action descent");
    dbl::Square pb = base_.hCompose2(q0.proj, base_.sqId(n.right.carrier));
    dbl::Square actR = requireFactor(
        base_.factorCoeq(dbl::LocalCoeq{pb.tgt, pb}, base_.vCompose2(n.actR, q0.proj), idl,
                         idr),
        "local coequalizer of bimodules: right action descent");
    BimoduleData qb{n.left, n.right, q0.cell, std::move(actL), std::move(actR), std::nullopt};
    dbl::Square proj = sW(EquivariantMap{n, qb, idHom(base_, n.left), idHom(base_, n.right),
                                         q0.proj});
    return dbl::LocalCoeq{hW(std::move(qb)), std::move(proj)};
  }

  std::optional<dbl::Square> factorCoeq(const dbl::LocalCoeq& q, const dbl::Square& cand,
                                        const dbl::Vert& u, const dbl::Vert& v) const override {
    const EquivariantMap &p = equivariantOf(q.proj), &c = equivariantOf(cand);
    const MonoidHom &uh = homOf(u), &vh = homOf(v);
    auto chi = base_.factorCoeq(dbl::LocalCoeq{p.map.tgt, p.map}, c.map, uh.f, vh.f);
    if (!chi) return std::nullopt;
    EquivariantMap e{bimoduleOf(q.cell), c.tgt, uh, vh, *chi};
    if (!equivariantOk(base_, e)) return std::nullopt;
    return sW(std::move(e));
  }

  dbl::Obj sampleObj(fin::Rng& rng, std::size_t maxSize) const override {
    if (sampler_) return oW(sampler_(rng, maxSize));
    return oW(unitMonoid(base_, base_.sampleObj(rng, maxSize)));
  }

  std::optional<dbl::Vert> sampleVert(fin::Rng& rng, const dbl::Obj& dom,
                                      const dbl::Obj& cod) const override {
    const MonoidData &a = monoidOf(dom), &b = monoidOf(cod);
    bool same = monEq(base_, a, b);
    if (same && rng.below(2) == 0) return vW(idHom(base_, a));
    // between unit monoids every vertical arrow of the base lifts
    if (base_.hcellEq(a.carrier, base_.hUnit(a.base)) &&
        base_.hcellEq(b.carrier, base_.hUnit(b.base)) &&
        base_.squareEq(a.unit, base_.sqId(a.carrier)) &&
        base_.squareEq(b.unit, base_.sqId(b.carrier))) {
      auto f = base_.sampleVert(rng, a.base, b.base);
      if (!f) return same ? std::optional<dbl::Vert>(vW(idHom(base_, a))) : std::nullopt;
      return vW(MonoidHom{a, b, *f, base_.sqUnit(*f)});
    }
    // bounded search among all homomorphisms
    std::vector<MonoidHom> found;
    try {
      forEachHom(a, b, [&](MonoidHom h) {
        found.push_back(std::move(h));
        return found.size() < 16;
      });
    } catch (const BudgetError&) {
      // the space is too large to enumerate; fall back below
    }
    if (found.empty())
      return same ? std::optional<dbl::Vert>(vW(idHom(base_, a))) : std::nullopt;
    return vW(found[rng.below(found.size())]);
  }

  dbl::HCell sampleHCell(fin::Rng& rng, const dbl::Obj& lf, const dbl::Obj& rf,
                         std::size_t maxSize) const override {
    const MonoidData &a = monoidOf(lf), &b = monoidOf(rf);
    if (monEq(base_, a, b) && rng.below(3) == 0) return hW(unitBimodule(base_, a));
    std::size_t cap = maxSize > 1 ? maxSize - 1 : 1;
    dbl::HCell x = base_.sampleHCell(rng, a.base, b.base, cap);
    return hW(freeBimodule(base_, a, x, b));
  }

  std::optional<dbl::Square> sampleSquare(fin::Rng& rng, const dbl::HCell& src,
                                          const dbl::HCell& tgt, const dbl::Vert& f,
                                          const dbl::Vert& g) const override {
    const BimoduleData &sm = bimoduleOf(src), &tm = bimoduleOf(tgt);
    const MonoidHom &fh = homOf(f), &gh = homOf(g);
    if (sm.generator) {
      // maps out of a free bimodule correspond to maps out of its generator
      auto h0 = base_.sampleSquare(rng, *sm.generator, tm.cell, fh.f, gh.f);
      if (h0) {
        dbl::Square j = base_.hCompose2(base_.hCompose2(fh.map, *h0), gh.map);
        dbl::Square k =
            base_.vCompose2(j, base_.hCompose2(tm.actL, base_.sqId(gh.cod.carrier)));
        dbl::Square e = base_.vCompose2(k, tm.actR);
        return sW(EquivariantMap{sm, tm, fh, gh, std::move(e)});
      }
    }
    if (bimEq(base_, sm, tm) && homIsId(base_, fh) && homIsId(base_, gh)) return sqId(src);
    return std::nullopt;
  }

  json objJson(const dbl::Obj& a) const override { return monoidJson(base_, monoidOf(a)); }
  json vertJson(const dbl::Vert& f) const override { return homJson(base_, homOf(f)); }
  json hcellJson(const dbl::HCell& m) const override {
    return bimoduleJson(base_, bimoduleOf(m));
  }
  json squareJson(const dbl::Square& s) const override {
    return equivariantJson(base_, equivariantOf(s));
  }

 private:
  std::optional<MonoidHom> invertHom(const MonoidHom& h) const {
    auto mi = base_.invert(h.map);
    if (!mi) return std::nullopt;
    return MonoidHom{h.cod, h.dom, mi->la, *mi};
  }

  bool homLawsOk(const MonoidData& a, const MonoidData& b, const dbl::Vert& f,
                 const dbl::Square& phi) const {
    dbl::Square lhsU = base_.vCompose2(a.unit, phi);
    dbl::Square rhsU = base_.vCompose2(base_.sqUnit(f), b.unit);
    if (!base_.squareEq(lhsU, rhsU)) return false;
    dbl::Square lhsM = base_.vCompose2(a.mult, phi);
    dbl::Square rhsM = base_.vCompose2(base_.hCompose2(phi, phi), b.mult);
    return base_.squareEq(lhsM, rhsM);
  }

  void forEachHom(const MonoidData& a, const MonoidData& b,
                  const std::function<bool(MonoidHom)>& cb) const {
    bool stop = false;
    base_.forEachVert(a.base, b.base, [&](const dbl::Vert& f) {
      base_.forEachSquare(a.carrier, b.carrier, f, f, [&](const dbl::Square& phi) {
        if (!homLawsOk(a, b, f, phi)) return true;
        if (!cb(MonoidHom{a, b, f, phi})) {
          stop = true;
          return false;
        }
        return true;
      });
      return !stop;
    });
  }

  const dbl::Instance& base_;
  MonoidSampler sampler_;
  std::string name_;
};

}  // namespace

std::unique_ptr<dbl::Instance> makeModInstance(const dbl::Instance& base,
                                               MonoidSampler sampler) {
  return std::make_unique<ModInstance>(base, std::move(sampler));
}

const dbl::Instance& modSpanInstance() {
  static std::unique_ptr<dbl::Instance> inst = makeModInstance(
      span::spanInstance(), [](fin::Rng& rng, std::size_t maxSize) {
        const dbl::Instance& d = span::spanInstance();
        if (rng.below(2) == 0) return unitMonoid(d, d.sampleObj(rng, maxSize));
        PathCat p = randomPathCat(rng, std::min<std::size_t>(maxSize, 3));
        return finCatToMonoid(p.cat);
      });
  return *inst;
}

const dbl::Instance& modMatInstance() {
  static std::unique_ptr<dbl::Instance> inst = makeModInstance(
      mat::matInstance(), [](fin::Rng& rng, std::size_t maxSize) {
        const dbl::Instance& d = mat::matInstance();
        if (rng.below(2) == 0) return unitMonoid(d, d.sampleObj(rng, maxSize));
        PathCat p = randomPathCat(rng, std::min<std::size_t>(maxSize, 3));
        return finCatToMatMonoid(p.cat);
      });
  return *inst;
}

// ---------------------------------------------------------------------------
// involution
// ---------------------------------------------------------------------------

laws::InvolutionData modInvolution(const dbl::Instance& base,
                                   const laws::InvolutionData& baseInv) {
  const dbl::Instance* d = &base;
  laws::InvolutionData inv = baseInv;

  auto opMonoid = [d, inv](const MonoidData& a) {
    dbl::Obj baseOp = inv.opObj(a.base);
    dbl::HCell carrier = inv.opCell(a.carrier);
    dbl::Square unit = d->vCompose2(inv.unitCmp(a.base), inv.opSquare(a.unit));
    dbl::Square mult =
        d->vCompose2(inv.compCmp(a.carrier, a.carrier), inv.opSquare(a.mult));
    return MonoidData{std::move(baseOp), std::move(carrier), std::move(unit),
                      std::move(mult)};
  };
  auto opHom = [d, inv, opMonoid](const MonoidHom& h) {
    return MonoidHom{opMonoid(h.dom), opMonoid(h.cod), inv.opVert(h.f), inv.opSquare(h.map)};
  };
  auto opBim = [d, inv, opMonoid](const BimoduleData& m) {
    // the reverse bimodule: the left action comes from the right one
    dbl::HCell cell = inv.opCell(m.cell);
    dbl::Square actL =
        d->vCompose2(inv.compCmp(m.cell, m.right.carrier), inv.opSquare(m.actR));
    dbl::Square actR =
        d->vCompose2(inv.compCmp(m.left.carrier, m.cell), inv.opSquare(m.actL));
    return BimoduleData{opMonoid(m.right), opMonoid(m.left), std::move(cell),
                        std::move(actL), std::move(actR), std::nullopt};
  };
  auto opEq = [d, inv, opBim, opHom](const EquivariantMap& e) {
    return EquivariantMap{opBim(e.src), opBim(e.tgt), opHom(e.rh), opHom(e.lh),
                          inv.opSquare(e.map)};
  };

  laws::InvolutionData out;
  out.opObj = [opMonoid](const dbl::Obj& a) { return oW(opMonoid(monoidOf(a))); };
  out.opVert = [opHom](const dbl::Vert& f) { return vW(opHom(homOf(f))); };
  out.opCell = [opBim](const dbl::HCell& m) { return hW(opBim(bimoduleOf(m))); };
  out.opSquare = [opEq](const dbl::Square& s) { return sW(opEq(equivariantOf(s))); };
  out.compCmp = [d, inv, opBim](const dbl::HCell& mc, const dbl::HCell& nc) {
    const BimoduleData &m = bimoduleOf(mc), &n = bimoduleOf(nc);
    TensorResult t = tensorOverMonoid(*d, m, n);
    BimoduleData no = opBim(n), mo = opBim(m);
    TensorResult to = tensorOverMonoid(*d, no, mo);
    // reverse the representatives, then reverse the projection, and descend
    dbl::Square cand =
        d->vCompose2(inv.compCmp(m.cell, n.cell), inv.opSquare(t.proj));
    dbl::Square under = requireFactor(
        d->factorCoeq(dbl::LocalCoeq{to.proj.tgt, to.proj}, cand,
                      d->vId(no.cell.lf), d->vId(mo.cell.rf)),
        "involution composition comparison");
    return sW(EquivariantMap{to.bimodule, opBim(t.bimodule), idHom(*d, no.left),
                             idHom(*d, mo.right), std::move(under)});
  };
  out.unitCmp = [d, opMonoid, opBim](const dbl::Obj& a) {
    const MonoidData& mon = monoidOf(a);
    MonoidData mo = opMonoid(mon);
    BimoduleData srcBim = unitBimodule(*d, mo);
    BimoduleData tgtBim = opBim(unitBimodule(*d, mon));
    return sW(EquivariantMap{srcBim, tgtBim, idHom(*d, mo), idHom(*d, mo),
                             d->sqId(mo.carrier)});
  };
  out.xiObj = [d, inv, opMonoid](const dbl::Obj& a) {
    const MonoidData& mon = monoidOf(a);
    return vW(MonoidHom{opMonoid(opMonoid(mon)), mon, inv.xiObj(mon.base),
                        inv.xiCell(mon.carrier)});
  };
  out.xiCell = [d, inv, opMonoid, opBim](const dbl::HCell& mc) {
    const BimoduleData& m = bimoduleOf(mc);
    MonoidHom xl{opMonoid(opMonoid(m.left)), m.left, inv.xiObj(m.left.base),
                 inv.xiCell(m.left.carrier)};
    MonoidHom xr{opMonoid(opMonoid(m.right)), m.right, inv.xiObj(m.right.base),
                 inv.xiCell(m.right.carrier)};
    return sW(EquivariantMap{opBim(opBim(m)), m, std::move(xl), std::move(xr),
                             inv.xiCell(m.cell)});
  };
  return out;
}

// ---------------------------------------------------------------------------
// finite categories
// ---------------------------------------------------------------------------

std::optional<std::size_t> FinCat::compose(std::size_t i, std::size_t j) const {
  if (i >= comp.size() || j >= comp[i].size()) return std::nullopt;
  return comp[i][j];
}

laws::LawReport checkFinCat(const FinCat& c) {
  laws::LawReport rep;
  rep.lawName = "category";
  auto fail = [&](const std::string& law, json w) {
    rep.pass = false;
    rep.lawName = law;
    rep.witness = std::move(w);
    return rep;
  };
  std::size_t nm = c.morphisms.size();
  if (c.src.dom != c.morphisms || c.src.cod != c.objects || c.tgt.dom != c.morphisms ||
      c.tgt.cod != c.objects || c.ident.dom != c.objects || c.ident.cod != c.morphisms ||
      c.comp.size() != nm)
    return fail("category-shape", json{{"morphisms", nm}, {"objects", c.objects.size()}});
  for (const auto& row : c.comp)
    if (row.size() != nm) return fail("category-shape", json{{"morphisms", nm}});
  for (std::size_t x = 0; x < c.objects.size(); ++x) {
    std::size_t i = c.ident.apply(x);
    if (c.src.apply(i) != x || c.tgt.apply(i) != x)
      return fail("category-identity-frames", json{{"object", c.objects.elems[x]}});
  }
  for (std::size_t i = 0; i < nm; ++i)
    for (std::size_t j = 0; j < nm; ++j) {
      bool composable = c.tgt.apply(i) == c.src.apply(j);
      if (composable != c.comp[i][j].has_value())
        return fail("category-composability",
                    json{{"first", c.morphisms.elems[i]}, {"second", c.morphisms.elems[j]}});
      if (!composable) continue;
      std::size_t k = *c.comp[i][j];
      if (k >= nm || c.src.apply(k) != c.src.apply(i) || c.tgt.apply(k) != c.tgt.apply(j))
        return fail("category-composite-frames",
                    json{{"first", c.morphisms.elems[i]}, {"second", c.morphisms.elems[j]}});
    }
  for (std::size_t i = 0; i < nm; ++i) {
    if (*c.comp[c.ident.apply(c.src.apply(i))][i] != i ||
        *c.comp[i][c.ident.apply(c.tgt.apply(i))] != i)
      return fail("category-unit", json{{"morphism", c.morphisms.elems[i]}});
  }
  for (std::size_t i = 0; i < nm; ++i)
    for (std::size_t j = 0; j < nm; ++j) {
      if (c.tgt.apply(i) != c.src.apply(j)) continue;
      for (std::size_t k = 0; k < nm; ++k) {
        if (c.tgt.apply(j) != c.src.apply(k)) continue;
        if (*c.comp[*c.comp[i][j]][k] != *c.comp[i][*c.comp[j][k]])
          return fail("category-associativity", json{{"first", c.morphisms.elems[i]},
                                                     {"second", c.morphisms.elems[j]},
                                                     {"third", c.morphisms.elems[k]}});
      }
    }
  return rep;
}

std::vector<FinCat> enumerateFinCats(std::size_t maxObjects, std::size_t maxMorphisms) {
  std::vector<FinCat> out;
  for (std::size_t nObj = 1; nObj <= maxObjects; ++nObj) {
    if (maxMorphisms < nObj) continue;
    std::vector<std::string> objLabels, morLabels;
    for (std::size_t i = 0; i < nObj; ++i) objLabels.push_back("o" + std::to_string(i));
    FinSet objects = fin::makeSet("objects", objLabels);
    for (std::size_t nExtra = 0; nExtra + nObj <= maxMorphisms; ++nExtra) {
      std::size_t nm = nObj + nExtra;
      // frames of the non-identity morphisms: an odometer over nObj² choices
      std::vector<std::size_t> frames(nExtra, 0);
      while (true) {
        std::vector<std::size_t> srcTab(nm), tgtTab(nm), identTab(nObj);
        morLabels.clear();
        for (std::size_t i = 0; i < nObj; ++i) {
          morLabels.push_back("id" + std::to_string(i));
          srcTab[i] = tgtTab[i] = i;
          identTab[i] = i;
        }
        for (std::size_t k = 0; k < nExtra; ++k) {
          morLabels.push_back("u" + std::to_string(k));
          srcTab[nObj + k] = frames[k] / nObj;
          tgtTab[nObj + k] = frames[k] % nObj;
        }
        FinSet morphisms = fin::makeSet("morphisms", morLabels);
        FinCat cat{objects, morphisms, FinFn{morphisms, objects, srcTab},
                   FinFn{morphisms, objects, tgtTab}, FinFn{objects, morphisms, identTab},
                   {}};
        cat.comp.assign(nm, std::vector<std::optional<std::size_t>>(nm, std::nullopt));
        // identity composites are forced; collect the free composable pairs
        std::vector<std::pair<std::size_t, std::size_t>> freePairs;
        std::vector<std::vector<std::size_t>> options;
        for (std::size_t i = 0; i < nm; ++i)
          for (std::size_t j = 0; j < nm; ++j) {
            if (tgtTab[i] != srcTab[j]) continue;
            if (i < nObj)
              cat.comp[i][j] = j;
            else if (j < nObj)
              cat.comp[i][j] = i;
            else {
              std::vector<std::size_t> opts;
              for (std::size_t k = 0; k < nm; ++k)
                if (srcTab[k] == srcTab[i] && tgtTab[k] == tgtTab[j]) opts.push_back(k);
              if (opts.empty()) goto nextFrames;  // no lawful table exists
              freePairs.emplace_back(i, j);
              options.push_back(std::move(opts));
            }
          }
        {
          std::vector<std::size_t> pick(freePairs.size(), 0);
          while (true) {
            for (std::size_t t = 0; t < freePairs.size(); ++t)
              cat.comp[freePairs[t].first][freePairs[t].second] = options[t][pick[t]];
            if (checkFinCat(cat).pass) out.push_back(cat);
            std::size_t t = 0;
            for (; t < pick.size(); ++t) {
              if (++pick[t] < options[t].size()) break;
              pick[t] = 0;
            }
            if (t == pick.size()) break;
          }
        }
      nextFrames:
        std::size_t k = 0;
        for (; k < nExtra; ++k) {
          if (++frames[k] < nObj * nObj) break;
          frames[k] = 0;
        }
        if (k == nExtra) break;
      }
    }
  }
  return out;
}

bool finCatIso(const FinCat& a, const FinCat& b) {
  std::size_t no = a.objects.size(), nm = a.morphisms.size();
  if (b.objects.size() != no || b.morphisms.size() != nm) return false;
  std::vector<std::size_t> op(no);
  std::iota(op.begin(), op.end(), 0);
  do {
    std::vector<std::size_t> mp(nm);
    std::iota(mp.begin(), mp.end(), 0);
    do {
      bool ok = true;
      for (std::size_t i = 0; i < nm && ok; ++i)
        ok = b.src.apply(mp[i]) == op[a.src.apply(i)] &&
             b.tgt.apply(mp[i]) == op[a.tgt.apply(i)];
      for (std::size_t x = 0; x < no && ok; ++x)
        ok = mp[a.ident.apply(x)] == b.ident.apply(op[x]);
      for (std::size_t i = 0; i < nm && ok; ++i)
        for (std::size_t j = 0; j < nm && ok; ++j) {
          if (a.tgt.apply(i) != a.src.apply(j)) continue;
          ok = b.comp[mp[i]][mp[j]].has_value() &&
               *b.comp[mp[i]][mp[j]] == mp[*a.comp[i][j]];
        }
      if (ok) return true;
    } while (std::next_permutation(mp.begin(), mp.end()));
  } while (std::next_permutation(op.begin(), op.end()));
  return false;
}

MonoidData finCatToMonoid(const FinCat& c) {
  laws::LawReport r = checkFinCat(c);
  if (!r.pass) throw InputError("category data rejected: " + r.lawName);
  span::SpanCell carrier = span::makeSpan(c.objects, c.objects, c.morphisms, c.src, c.tgt);
  FinFn idObj = FinFn::identity(c.objects);
  dbl::Square unit =
      span::wrapSquare(span::spanUnit(c.objects), carrier, idObj, idObj, c.ident);
  span::SpanCell cc = span::spanCompose(carrier, carrier);
  std::vector<std::size_t> tab;
  for (std::size_t i = 0; i < c.morphisms.size(); ++i)
    for (std::size_t j = 0; j < c.morphisms.size(); ++j)
      if (c.tgt.apply(i) == c.src.apply(j)) tab.push_back(*c.comp[i][j]);
  dbl::Square mult = span::wrapSquare(cc, carrier, idObj, idObj,
                                      FinFn{cc.apex, c.morphisms, std::move(tab)});
  return MonoidData{span::wrapObj(c.objects), span::wrapCell(carrier), std::move(unit),
                    std::move(mult)};
}

FinCat monoidToFinCat(const MonoidData& a) {
  const FinSet& objects = span::objOf(a.base);
  const span::SpanCell& carrier = span::cellOf(a.carrier);
  const FinFn& ident = span::mapOf(a.unit);
  const FinFn& mult = span::mapOf(a.mult);
  span::SpanCell cc = span::spanCompose(carrier, carrier);
  if (mult.dom != cc.apex)
    throw InputError("category reading: the multiplication is not presented on the "
                     "composite of the carrier with itself");
  FinCat c{objects, carrier.apex, carrier.l, carrier.r, ident, {}};
  std::size_t nm = carrier.apex.size();
  c.comp.assign(nm, std::vector<std::optional<std::size_t>>(nm, std::nullopt));
  std::size_t k = 0;
  for (std::size_t i = 0; i < nm; ++i)
    for (std::size_t j = 0; j < nm; ++j)
      if (carrier.r.apply(i) == carrier.l.apply(j)) c.comp[i][j] = mult.apply(k++);
  laws::LawReport r = checkFinCat(c);
  if (!r.pass) throw InputError("category reading: " + r.lawName);
  return c;
}

namespace {

// global indices of the morphisms x → y, in morphism order
std::vector<std::size_t> homIndices(const FinCat& c, std::size_t x, std::size_t y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c.morphisms.size(); ++i)
    if (c.src.apply(i) == x && c.tgt.apply(i) == y) out.push_back(i);
  return out;
}

FinSet homSet(const FinCat& c, std::size_t x, std::size_t y) {
  std::vector<std::string> elems;
  for (std::size_t i : homIndices(c, x, y)) elems.push_back(c.morphisms.elems[i]);
  return fin::makeSet("hom(" + c.objects.elems[x] + ";" + c.objects.elems[y] + ")",
                      std::move(elems));
}

std::size_t positionIn(const std::vector<std::size_t>& v, std::size_t x) {
  for (std::size_t p = 0; p < v.size(); ++p)
    if (v[p] == x) return p;
  throw InputError("category reading: a composite escapes its hom-set");
}

mat::MatCell homMatrix(const FinCat& c) {
  std::vector<FinSet> entries;
  for (std::size_t x = 0; x < c.objects.size(); ++x)
    for (std::size_t y = 0; y < c.objects.size(); ++y) entries.push_back(homSet(c, x, y));
  return mat::makeMat(c.objects, c.objects, std::move(entries));
}

}  // namespace

MonoidData finCatToMatMonoid(const FinCat& c) {
  laws::LawReport r = checkFinCat(c);
  if (!r.pass) throw InputError("category data rejected: " + r.lawName);
  std::size_t no = c.objects.size();
  mat::MatCell carrier = homMatrix(c);
  FinFn idObj = FinFn::identity(c.objects);
  // unit: the diagonal marker goes to the identity morphism
  mat::MatCell u = mat::matUnit(c.objects);
  std::vector<FinFn> unitMaps;
  for (std::size_t x = 0; x < no; ++x)
    for (std::size_t y = 0; y < no; ++y) {
      if (x == y) {
        std::size_t pos = positionIn(homIndices(c, x, x), c.ident.apply(x));
        unitMaps.push_back(FinFn{u.at(x, y), carrier.at(x, y), {pos}});
      } else {
        unitMaps.push_back(FinFn{u.at(x, y), carrier.at(x, y), {}});
      }
    }
  dbl::Square unit = mat::wrapSquare(u, carrier, idObj, idObj, std::move(unitMaps));
  // multiplication: composition, entry by entry in sum order
  mat::MatCell cc = mat::matCompose(carrier, carrier);
  std::vector<FinFn> multMaps;
  for (std::size_t x = 0; x < no; ++x)
    for (std::size_t z = 0; z < no; ++z) {
      std::vector<std::size_t> tab;
      std::vector<std::size_t> xz = homIndices(c, x, z);
      for (std::size_t b = 0; b < no; ++b)
        for (std::size_t i : homIndices(c, x, b))
          for (std::size_t j : homIndices(c, b, z)) tab.push_back(positionIn(xz, *c.comp[i][j]));
      multMaps.push_back(FinFn{cc.at(x, z), carrier.at(x, z), std::move(tab)});
    }
  dbl::Square mult = mat::wrapSquare(cc, carrier, idObj, idObj, std::move(multMaps));
  return MonoidData{mat::wrapObj(c.objects), mat::wrapCell(carrier), std::move(unit),
                    std::move(mult)};
}

FinCat matMonoidToFinCat(const MonoidData& a) {
  const FinSet& objects = mat::objOf(a.base);
  const mat::MatCell& carrier = mat::cellOf(a.carrier);
  std::size_t no = objects.size();
  // morphisms: the entries in row-major entry order, labels kept
  std::vector<std::string> morLabels;
  std::vector<std::size_t> srcTab, tgtTab;
  for (std::size_t x = 0; x < no; ++x)
    for (std::size_t y = 0; y < no; ++y)
      for (const auto& lbl : carrier.at(x, y).elems) {
        morLabels.push_back(lbl);
        srcTab.push_back(x);
        tgtTab.push_back(y);
      }
  FinSet morphisms = fin::makeSet("morphisms", std::move(morLabels));
  std::size_t nm = morphisms.size();
  // identities from the unit square
  const std::vector<FinFn>& unitMaps = mat::mapsOf(a.unit);
  std::vector<std::size_t> identTab(no);
  for (std::size_t x = 0; x < no; ++x) {
    const FinFn& um = unitMaps[x * no + x];
    if (um.dom.size() != 1)
      throw InputError("category reading: the unit entry is not a single marker");
    identTab[x] = morphisms.indexOf(um.cod.elems[um.apply(0)]);
  }
  FinCat c{objects, morphisms, FinFn{morphisms, objects, srcTab},
           FinFn{morphisms, objects, tgtTab}, FinFn{objects, morphisms, identTab}, {}};
  c.comp.assign(nm, std::vector<std::optional<std::size_t>>(nm, std::nullopt));
  const std::vector<FinFn>& multMaps = mat::mapsOf(a.mult);
  if (!(mat::cellOf(a.mult.src) == mat::matCompose(carrier, carrier)))
    throw InputError("category reading: the multiplication is not presented on the "
                     "composite of the carrier with itself");
  for (std::size_t x = 0; x < no; ++x)
    for (std::size_t z = 0; z < no; ++z) {
      const FinFn& mm = multMaps[x * no + z];
      std::size_t pos = 0;
      for (std::size_t b = 0; b < no; ++b)
        for (std::size_t i : homIndices(c, x, b))
          for (std::size_t j : homIndices(c, b, z)) {
            c.comp[i][j] = morphisms.indexOf(mm.cod.elems[mm.apply(pos)]);
            ++pos;
          }
    }
  laws::LawReport r = checkFinCat(c);
  if (!r.pass) throw InputError("category reading: " + r.lawName);
  return c;
}

PathCat randomPathCat(fin::Rng& rng, std::size_t maxVertices) {
  std::size_t n = 1 + rng.below(std::max<std::size_t>(maxVertices, 1));
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.below(2) == 0) edges.emplace_back(i, j);
  // all directed paths along the edges, ordered by length then chain
  std::vector<std::vector<std::size_t>> chains;
  std::vector<std::size_t> ch;
  std::function<void()> grow = [&]() {
    chains.push_back(ch);
    for (const auto& e : edges)
      if (e.first == ch.back()) {
        ch.push_back(e.second);
        grow();
        ch.pop_back();
      }
  };
  for (std::size_t v = 0; v < n; ++v) {
    ch = {v};
    grow();
  }
  std::sort(chains.begin(), chains.end(),
            [](const auto& a, const auto& b) {
              return a.size() != b.size() ? a.size() < b.size() : a < b;
            });
  std::vector<std::string> objLabels;
  for (std::size_t v = 0; v < n; ++v) objLabels.push_back("v" + std::to_string(v));
  FinSet objects = fin::makeSet("vertices", objLabels);
  auto chainLabel = [&](const std::vector<std::size_t>& cch) {
    std::string inner;
    for (std::size_t t = 0; t < cch.size(); ++t) {
      if (t) inner += ";";
      inner += objLabels[cch[t]];
    }
    return fin::taggedLabel("p", inner);
  };
  std::vector<std::string> morLabels;
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t k = 0; k < chains.size(); ++k) {
    morLabels.push_back(chainLabel(chains[k]));
    index[chains[k]] = k;
  }
  FinSet morphisms = fin::makeSet("paths", std::move(morLabels));
  std::size_t nm = chains.size();
  std::vector<std::size_t> srcTab(nm), tgtTab(nm), identTab(n);
  for (std::size_t k = 0; k < nm; ++k) {
    srcTab[k] = chains[k].front();
    tgtTab[k] = chains[k].back();
  }
  for (std::size_t v = 0; v < n; ++v) identTab[v] = index.at({v});
  FinCat cat{objects, morphisms, FinFn{morphisms, objects, srcTab},
             FinFn{morphisms, objects, tgtTab}, FinFn{objects, morphisms, identTab}, {}};
  cat.comp.assign(nm, std::vector<std::optional<std::size_t>>(nm, std::nullopt));
  for (std::size_t i = 0; i < nm; ++i)
    for (std::size_t j = 0; j < nm; ++j) {
      if (chains[i].back() != chains[j].front()) continue;
      std::vector<std::size_t> merged = chains[i];
      merged.insert(merged.end(), chains[j].begin() + 1, chains[j].end());
      cat.comp[i][j] = index.at(merged);
    }
  PathCat out{std::move(cat), edges, {}, {}};
  auto edgeIndex = [&](std::size_t a, std::size_t b) {
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e] == std::make_pair(a, b)) return e;
    throw InputError("path category: a chain step is not an edge");
  };
  for (const auto& e : edges) out.edgeMorphism.push_back(index.at({e.first, e.second}));
  for (std::size_t k = 0; k < nm; ++k) {
    std::vector<std::size_t> fct;
    for (std::size_t t = 0; t + 1 < chains[k].size(); ++t)
      fct.push_back(edgeIndex(chains[k][t], chains[k][t + 1]));
    out.factorization.push_back(std::move(fct));
  }
  return out;
}

// ---------------------------------------------------------------------------
// profunctors
// ---------------------------------------------------------------------------

laws::LawReport checkProfunctor(const ProfData& p) {
  laws::LawReport rep;
  rep.lawName = "profunctor";
  auto fail = [&](const std::string& law, json w) {
    rep.pass = false;
    rep.lawName = law;
    rep.witness = std::move(w);
    return rep;
  };
  std::size_t nd = p.dom.objects.size(), nc = p.cod.objects.size();
  std::size_t md = p.dom.morphisms.size(), mc = p.cod.morphisms.size();
  if (p.at.size() != nd || p.leftAct.size() != md || p.rightAct.size() != mc)
    return fail("profunctor-shape", json{{"rows", p.at.size()}});
  for (const auto& row : p.at)
    if (row.size() != nc) return fail("profunctor-shape", json{{"cols", row.size()}});
  for (std::size_t u = 0; u < md; ++u) {
    if (p.leftAct[u].size() != nc) return fail("profunctor-shape", json{{"leftAct", u}});
    for (std::size_t j = 0; j < nc; ++j) {
      const FinFn& f = p.leftAct[u][j];
      if (f.dom != p.at[p.dom.tgt.apply(u)][j] || f.cod != p.at[p.dom.src.apply(u)][j])
        return fail("profunctor-left-frames",
                    json{{"morphism", p.dom.morphisms.elems[u]}, {"column", j}});
    }
  }
  for (std::size_t v = 0; v < mc; ++v) {
    if (p.rightAct[v].size() != nd) return fail("profunctor-shape", json{{"rightAct", v}});
    for (std::size_t i = 0; i < nd; ++i) {
      const FinFn& f = p.rightAct[v][i];
      if (f.dom != p.at[i][p.cod.src.apply(v)] || f.cod != p.at[i][p.cod.tgt.apply(v)])
        return fail("profunctor-right-frames",
                    json{{"morphism", p.cod.morphisms.elems[v]}, {"row", i}});
    }
  }
  for (std::size_t x = 0; x < nd; ++x) {
    std::size_t e = p.dom.ident.apply(x);
    for (std::size_t j = 0; j < nc; ++j)
      if (p.leftAct[e][j] != FinFn::identity(p.at[x][j]))
        return fail("profunctor-identity", json{{"side", "left"}, {"object", x}});
  }
  for (std::size_t y = 0; y < nc; ++y) {
    std::size_t e = p.cod.ident.apply(y);
    for (std::size_t i = 0; i < nd; ++i)
      if (p.rightAct[e][i] != FinFn::identity(p.at[i][y]))
        return fail("profunctor-identity", json{{"side", "right"}, {"object", y}});
  }
  for (std::size_t u = 0; u < md; ++u)
    for (std::size_t w = 0; w < md; ++w) {
      auto k = p.dom.compose(u, w);
      if (!k) continue;
      for (std::size_t j = 0; j < nc; ++j)
        if (p.leftAct[*k][j] != p.leftAct[w][j].then(p.leftAct[u][j]))
          return fail("profunctor-left-functoriality",
                      json{{"first", p.dom.morphisms.elems[u]},
                           {"second", p.dom.morphisms.elems[w]},
                           {"column", j}});
    }
  for (std::size_t v = 0; v < mc; ++v)
    for (std::size_t w = 0; w < mc; ++w) {
      auto k = p.cod.compose(v, w);
      if (!k) continue;
      for (std::size_t i = 0; i < nd; ++i)
        if (p.rightAct[*k][i] != p.rightAct[v][i].then(p.rightAct[w][i]))
          return fail("profunctor-right-functoriality",
                      json{{"first", p.cod.morphisms.elems[v]},
                           {"second", p.cod.morphisms.elems[w]},
                           {"row", i}});
    }
  for (std::size_t u = 0; u < md; ++u)
    for (std::size_t v = 0; v < mc; ++v) {
      std::size_t a = p.dom.src.apply(u), b = p.dom.tgt.apply(u);
      std::size_t c = p.cod.src.apply(v), e = p.cod.tgt.apply(v);
      // both paths at[b][c] → at[a][e]
      if (p.leftAct[u][c].then(p.rightAct[v][a]) != p.rightAct[v][b].then(p.leftAct[u][e]))
        return fail("profunctor-action-commutation",
                    json{{"left", p.dom.morphisms.elems[u]}, {"right", p.cod.morphisms.elems[v]}});
    }
  return rep;
}

ProfData identityProfunctor(const FinCat& c) {
  laws::LawReport r = checkFinCat(c);
  if (!r.pass) throw InputError("category data rejected: " + r.lawName);
  std::size_t no = c.objects.size(), nm = c.morphisms.size();
  ProfData p;
  p.dom = c;
  p.cod = c;
  p.at.assign(no, std::vector<FinSet>());
  for (std::size_t x = 0; x < no; ++x)
    for (std::size_t y = 0; y < no; ++y) p.at[x].push_back(homSet(c, x, y));
  p.leftAct.assign(nm, {});
  p.rightAct.assign(nm, {});
  for (std::size_t u = 0; u < nm; ++u) {
    std::size_t a = c.src.apply(u), b = c.tgt.apply(u);
    for (std::size_t j = 0; j < no; ++j) {
      std::vector<std::size_t> bj = homIndices(c, b, j), aj = homIndices(c, a, j);
      std::vector<std::size_t> tab;
      for (std::size_t m : bj) tab.push_back(positionIn(aj, *c.comp[u][m]));
      p.leftAct[u].push_back(FinFn{p.at[b][j], p.at[a][j], std::move(tab)});
    }
    for (std::size_t i = 0; i < no; ++i) {
      std::vector<std::size_t> ia = homIndices(c, i, a), ib = homIndices(c, i, b);
      std::vector<std::size_t> tab;
      for (std::size_t m : ia) tab.push_back(positionIn(ib, *c.comp[m][u]));
      p.rightAct[u].push_back(FinFn{p.at[i][a], p.at[i][b], std::move(tab)});
    }
  }
  return p;
}

ProfData randomProfunctor(fin::Rng& rng, const PathCat& dom, const PathCat& cod,
                          std::size_t maxSize) {
  const FinCat &D = dom.cat, &C = cod.cat;
  std::size_t nd = D.objects.size(), nc = C.objects.size();
  // The profunctor free on a random generator matrix G:
  //   P(a,c) = Σ_{i,j} D(a,i) × G(i,j) × C(j,c)
  // with the actions given by composition in D and C; functoriality and the
  // commutation of the two actions are then automatic.
  std::vector<std::vector<std::vector<std::string>>> gen(
      nd, std::vector<std::vector<std::string>>(nc));
  std::size_t total = 0;
  std::size_t cap = std::min<std::size_t>(std::max<std::size_t>(maxSize, 1), 2);
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      std::size_t sz = rng.below(cap + 1);
      for (std::size_t k = 0; k < sz; ++k)
        gen[i][j].push_back("g" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                            std::to_string(k));
      total += sz;
    }
  if (total == 0) gen[0][0].push_back("g0_0_0");

  // element (d: a→i, g ∈ G(i,j), c2: j→c), labelled d|g|c2
  struct Elt {
    std::size_t d, i, j, g, c2;
  };
  std::vector<std::vector<std::vector<Elt>>> elts(nd, std::vector<std::vector<Elt>>(nc));
  std::vector<std::vector<std::map<std::string, std::size_t>>> index(
      nd, std::vector<std::map<std::string, std::size_t>>(nc));
  auto labelOf = [&](const Elt& e) {
    return D.morphisms.elems[e.d] + "|" + gen[e.i][e.j][e.g] + "|" + C.morphisms.elems[e.c2];
  };
  ProfData p;
  p.dom = D;
  p.cod = C;
  p.at.assign(nd, std::vector<FinSet>());
  for (std::size_t a = 0; a < nd; ++a)
    for (std::size_t c = 0; c < nc; ++c) {
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < nd; ++i)
        for (std::size_t j = 0; j < nc; ++j)
          for (std::size_t d : homIndices(D, a, i))
            for (std::size_t g = 0; g < gen[i][j].size(); ++g)
              for (std::size_t c2 : homIndices(C, j, c)) {
                Elt e{d, i, j, g, c2};
                index[a][c][labelOf(e)] = elts[a][c].size();
                elts[a][c].push_back(e);
                labels.push_back(labelOf(e));
              }
      p.at[a].push_back(fin::makeSet("P" + std::to_string(a) + "_" + std::to_string(c),
                                     std::move(labels)));
    }
  std::size_t md = D.morphisms.size(), mc = C.morphisms.size();
  p.leftAct.assign(md, {});
  p.rightAct.assign(mc, {});
  for (std::size_t u = 0; u < md; ++u) {
    std::size_t a = D.src.apply(u), b = D.tgt.apply(u);
    for (std::size_t c = 0; c < nc; ++c) {
      std::vector<std::size_t> tab;
      for (const Elt& e : elts[b][c]) {
        Elt moved = e;
        moved.d = *D.compose(u, e.d);
        tab.push_back(index[a][c].at(labelOf(moved)));
      }
      p.leftAct[u].push_back(FinFn{p.at[b][c], p.at[a][c], std::move(tab)});
    }
  }
  for (std::size_t v = 0; v < mc; ++v) {
    std::size_t c = C.src.apply(v), e2 = C.tgt.apply(v);
    for (std::size_t i = 0; i < nd; ++i) {
      std::vector<std::size_t> tab;
      for (const Elt& e : elts[i][c]) {
        Elt moved = e;
        moved.c2 = *C.compose(e.c2, v);
        tab.push_back(index[i][e2].at(labelOf(moved)));
      }
      p.rightAct[v].push_back(FinFn{p.at[i][c], p.at[i][e2], std::move(tab)});
    }
  }
  return p;
}

BimoduleData profunctorToBimodule(const ProfData& p) {
  laws::LawReport r = checkProfunctor(p);
  if (!r.pass) throw InputError("profunctor data rejected: " + r.lawName);
  MonoidData a = finCatToMatMonoid(p.dom), b = finCatToMatMonoid(p.cod);
  std::size_t nd = p.dom.objects.size(), nc = p.cod.objects.size();
  std::vector<FinSet> entries;
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < nc; ++j) entries.push_back(p.at[i][j]);
  mat::MatCell cell = mat::makeMat(p.dom.objects, p.cod.objects, std::move(entries));
  const mat::MatCell& acar = mat::cellOf(a.carrier);
  const mat::MatCell& bcar = mat::cellOf(b.carrier);
  FinFn idr = FinFn::identity(p.dom.objects), idc = FinFn::identity(p.cod.objects);
  // left action: (u, m) ↦ u·m, in the order of the composite entries
  mat::MatCell am = mat::matCompose(acar, cell);
  std::vector<FinFn> mapsL;
  for (std::size_t x = 0; x < nd; ++x)
    for (std::size_t j = 0; j < nc; ++j) {
      std::vector<std::size_t> tab;
      for (std::size_t bmid = 0; bmid < nd; ++bmid)
        for (std::size_t u : homIndices(p.dom, x, bmid))
          for (std::size_t m = 0; m < p.at[bmid][j].size(); ++m)
            tab.push_back(p.leftAct[u][j].apply(m));
      mapsL.push_back(FinFn{am.at(x, j), cell.at(x, j), std::move(tab)});
    }
  dbl::Square actL = mat::wrapSquare(am, cell, idr, idc, std::move(mapsL));
  // right action: (m, v) ↦ m·v
  mat::MatCell mb = mat::matCompose(cell, bcar);
  std::vector<FinFn> mapsR;
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t y = 0; y < nc; ++y) {
      std::vector<std::size_t> tab;
      for (std::size_t bmid = 0; bmid < nc; ++bmid)
        for (std::size_t m = 0; m < p.at[i][bmid].size(); ++m)
          for (std::size_t v : homIndices(p.cod, bmid, y))
            tab.push_back(p.rightAct[v][i].apply(m));
      mapsR.push_back(FinFn{mb.at(i, y), cell.at(i, y), std::move(tab)});
    }
  dbl::Square actR = mat::wrapSquare(mb, cell, idr, idc, std::move(mapsR));
  return BimoduleData{std::move(a), std::move(b), mat::wrapCell(cell), std::move(actL),
                      std::move(actR), std::nullopt};
}

ProfData bimoduleToProfunctor(const BimoduleData& m) {
  ProfData p;
  p.dom = matMonoidToFinCat(m.left);
  p.cod = matMonoidToFinCat(m.right);
  const mat::MatCell& cell = mat::cellOf(m.cell);
  std::size_t nd = p.dom.objects.size(), nc = p.cod.objects.size();
  p.at.assign(nd, std::vector<FinSet>());
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < nc; ++j) p.at[i].push_back(cell.at(i, j));
  // read the actions off the matrix squares, in composite entry order
  const mat::MatCell& acar = mat::cellOf(m.left.carrier);
  if (!(mat::cellOf(m.actL.src) == mat::matCompose(acar, cell)))
    throw InputError("profunctor reading: the left action is not presented on the composite");
  const std::vector<FinFn>& mapsL = mat::mapsOf(m.actL);
  std::size_t md = p.dom.morphisms.size(), mc = p.cod.morphisms.size();
  p.leftAct.assign(md, {});
  for (std::size_t u = 0; u < md; ++u) p.leftAct[u].assign(nc, FinFn{});
  for (std::size_t x = 0; x < nd; ++x)
    for (std::size_t j = 0; j < nc; ++j) {
      const FinFn& f = mapsL[x * nc + j];
      std::size_t pos = 0;
      for (std::size_t bmid = 0; bmid < nd; ++bmid)
        for (std::size_t u : homIndices(p.dom, x, bmid)) {
          std::vector<std::size_t> tab;
          for (std::size_t k = 0; k < p.at[bmid][j].size(); ++k) tab.push_back(f.apply(pos++));
          p.leftAct[u][j] = FinFn{p.at[bmid][j], p.at[x][j], std::move(tab)};
        }
    }
  const mat::MatCell& bcar = mat::cellOf(m.right.carrier);
  if (!(mat::cellOf(m.actR.src) == mat::matCompose(cell, bcar)))
    throw InputError("profunctor reading: the right action is not presented on the composite");
  const std::vector<FinFn>& mapsR = mat::mapsOf(m.actR);
  p.rightAct.assign(mc, {});
  for (std::size_t v = 0; v < mc; ++v) p.rightAct[v].assign(nd, FinFn{});
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t y = 0; y < nc; ++y) {
      const FinFn& f = mapsR[i * nc + y];
      std::size_t pos = 0;
      for (std::size_t bmid = 0; bmid < nc; ++bmid) {
        std::vector<std::vector<std::size_t>> perV;
        std::vector<std::size_t> vs = homIndices(p.cod, bmid, y);
        perV.assign(vs.size(), {});
        for (std::size_t k = 0; k < p.at[i][bmid].size(); ++k)
          for (std::size_t t = 0; t < vs.size(); ++t) perV[t].push_back(f.apply(pos++));
        for (std::size_t t = 0; t < vs.size(); ++t)
          p.rightAct[vs[t]][i] = FinFn{p.at[i][bmid], p.at[i][y], std::move(perV[t])};
      }
    }
  laws::LawReport r = checkProfunctor(p);
  if (!r.pass) throw InputError("profunctor reading: " + r.lawName);
  return p;
}

Partition partitionOf(const FinFn& proj) {
  std::vector<std::vector<std::string>> blocks(proj.cod.size());
  for (std::size_t i = 0; i < proj.dom.size(); ++i)
    blocks[proj.apply(i)].push_back(proj.dom.elems[i]);
  Partition out;
  for (auto& b : blocks) {
    if (b.empty()) continue;
    std::sort(b.begin(), b.end());
    out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<Partition>> coendOracle(const ProfData& m, const ProfData& n) {
  // the middle category must be shared
  if (!(m.cod.objects == n.dom.objects) || !(m.cod.morphisms == n.dom.morphisms) ||
      m.cod.src != n.dom.src || m.cod.tgt != n.dom.tgt || m.cod.ident != n.dom.ident ||
      m.cod.comp != n.dom.comp)
    throw InputError("composite oracle: the middle categories differ");
  const FinCat& mid = m.cod;
  std::size_t nd = m.dom.objects.size(), nc = n.cod.objects.size(), nb = mid.objects.size();
  std::vector<std::vector<Partition>> out(nd, std::vector<Partition>(nc));
  for (std::size_t a = 0; a < nd; ++a)
    for (std::size_t c = 0; c < nc; ++c) {
      // the middle sum, labelled the way the composite entries are
      std::vector<std::string> elems;
      std::map<std::string, std::size_t> idx;
      for (std::size_t b = 0; b < nb; ++b)
        for (const auto& x : m.at[a][b].elems)
          for (const auto& y : n.at[b][c].elems) {
            std::string lbl = mat::sumLabel(mid.objects.elems[b], fin::pairLabel(x, y));
            idx[lbl] = elems.size();
            elems.push_back(lbl);
          }
      // union–find over the action relations (x·u, y) ~ (x, u·y)
      std::vector<std::size_t> parent(elems.size());
      std::iota(parent.begin(), parent.end(), 0);
      std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
      };
      auto unite = [&](std::size_t i, std::size_t j) { parent[find(i)] = find(j); };
      for (std::size_t u = 0; u < mid.morphisms.size(); ++u) {
        std::size_t b = mid.src.apply(u), b2 = mid.tgt.apply(u);
        for (std::size_t xi = 0; xi < m.at[a][b].size(); ++xi)
          for (std::size_t yi = 0; yi < n.at[b2][c].size(); ++yi) {
            const std::string& xMoved = m.at[a][b2].elems[m.rightAct[u][a].apply(xi)];
            const std::string& yMoved = n.at[b][c].elems[n.leftAct[u][c].apply(yi)];
            std::string lhs =
                mat::sumLabel(mid.objects.elems[b2],
                              fin::pairLabel(xMoved, n.at[b2][c].elems[yi]));
            std::string rhs = mat::sumLabel(
                mid.objects.elems[b], fin::pairLabel(m.at[a][b].elems[xi], yMoved));
            unite(idx.at(lhs), idx.at(rhs));
          }
      }
      std::map<std::size_t, std::vector<std::string>> byRoot;
      for (std::size_t i = 0; i < elems.size(); ++i) byRoot[find(i)].push_back(elems[i]);
      Partition part;
      for (auto& [root, blk] : byRoot) {
        std::sort(blk.begin(), blk.end());
        part.push_back(std::move(blk));
      }
      std::sort(part.begin(), part.end());
      out[a][c] = std::move(part);
    }
  return out;
}

}  // namespace framedkit::mod
