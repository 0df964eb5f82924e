#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace framedkit::fin {

// Precondition violations (shape mismatches, unknown labels, malformed data).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exhaustive search was about to exceed its candidate budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Candidate cap for exhaustive searches. Reads FRAMEDKIT_BUDGET once,
// defaults to 1e6.
std::uint64_t searchBudget();

// splitmix64: deterministic across platforms, which the byte-identical
// report contract depends on. Not for cryptography.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }
  Rng fork() { return Rng(next()); }
};

struct FinSet {
  std::string name;
  std::vector<std::string> elems;  // distinct; order is part of the value

  std::size_t size() const { return elems.size(); }
  bool empty() const { return elems.empty(); }
  bool contains(const std::string& x) const;
  std::size_t indexOf(const std::string& x) const;  // InputError if absent

  // name is a display handle only; values compare by element list
  friend bool operator==(const FinSet& a, const FinSet& b) { return a.elems == b.elems; }
  friend bool operator!=(const FinSet& a, const FinSet& b) { return !(a == b); }
};

// Validates distinctness.
FinSet makeSet(std::string name, std::vector<std::string> elems);

struct FinFn {
  FinSet dom, cod;
  std::vector<std::size_t> tab;  // tab[i] = index in cod of the image of dom.elems[i]

  static FinFn identity(const FinSet& a);
  static FinFn make(const FinSet& dom, const FinSet& cod,
                    const std::function<std::string(const std::string&)>& f);
  static FinFn constant(const FinSet& dom, const FinSet& cod, const std::string& value);

  const std::string& at(const std::string& x) const;
  std::size_t apply(std::size_t i) const { return tab[i]; }
  FinFn then(const FinFn& g) const;  // x ↦ g(this(x))
  bool injective() const;
  bool surjective() const;
  bool bijective() const { return injective() && surjective(); }
  FinFn inverse() const;  // InputError unless bijective

  friend bool operator==(const FinFn& a, const FinFn& b) {
    return a.dom == b.dom && a.cod == b.cod && a.tab == b.tab;
  }
  friend bool operator!=(const FinFn& a, const FinFn& b) { return !(a == b); }
};

struct QuotientMap {
  FinSet source;
  // Partition of source.elems. Members listed in source order; classes
  // ordered by their earliest member; the representative is that member.
  std::vector<std::vector<std::string>> classes;

  const std::string& repOf(const std::string& x) const;
  FinSet quotient() const;    // labels class(rep), in class order
  FinFn projection() const;   // source → quotient
};

struct SpanDiagram {
  FinSet apex;
  FinFn p1, p2;
};

struct CospanDiagram {
  FinSet sum;
  FinFn i1, i2;
};

// f: A→C, g: B→C. Apex labels pair(a,b), lexicographic by (A order, B order).
// The apex is always a fresh set, never an alias of an input.
SpanDiagram pullback(const FinFn& f, const FinFn& g);

// Parallel pair f,g: A→B. Finest partition of B merging f(x) with g(x).
QuotientMap coequalizer(const FinFn& f, const FinFn& g);

SpanDiagram product(const FinSet& a, const FinSet& b);
CospanDiagram coproduct(const FinSet& a, const FinSet& b);

struct ImageFactorization {
  FinSet image;  // subset of cod(f), order inherited
  FinFn surj;    // dom(f) → image
  FinFn inj;     // image → cod(f)
};
ImageFactorization imageFactorization(const FinFn& f);

// A commuting requirement on a candidate bijection β: A→B. Two shapes are
// recognized by endpoint inspection:
//   u: X→A, v: X→B   requires β(u(x)) = v(x) for all x
//   u: A→Y, v: B→Y   requires u(a) = v(β(a)) for all a
struct FnConstraint {
  FinFn u, v;
};

// Deterministic backtracking in element order; returns the first bijection
// satisfying all constraints (and the accept filter, when given).
std::optional<FinFn> findBijection(const FinSet& a, const FinSet& b,
                                   const std::vector<FnConstraint>& constraints = {},
                                   const std::function<bool(const FinFn&)>& accept = nullptr);

// Visits every function a→b in lexicographic table order until cb returns
// false. Returns false iff stopped early. Throws BudgetError if the space
// exceeds the budget (0 = searchBudget()).
bool forEachFunction(const FinSet& a, const FinSet& b,
                     const std::function<bool(const FinFn&)>& cb, std::uint64_t budget = 0);
std::vector<FinFn> allFunctions(const FinSet& a, const FinSet& b);

// Structured labels. Constructed sets use these exclusively, so canonical
// isomorphisms are computable by label surgery.
std::string pairLabel(const std::string& x, const std::string& y);
std::optional<std::pair<std::string, std::string>> splitPair(const std::string& label);
std::string inlLabel(const std::string& x);
std::string inrLabel(const std::string& x);
std::string classLabel(const std::string& rep);
std::string taggedLabel(const std::string& tag, const std::string& inner);  // "tag(inner)"
std::optional<std::string> stripTag(const std::string& tag, const std::string& label);

}  // namespace framedkit::fin
