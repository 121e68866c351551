// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>

#include "stackbr/errors.hpp"
#include "stackbr/io.hpp"
#include "stackbr/stack.hpp"

using namespace stackbr;

namespace {

struct Failure {
  std::string what;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string show(const FinGenAbGroup& g) { return g.to_string(); }
std::string show(const std::string& s) { return s; }
std::string show(const char* s) { return s; }
std::string show(bool b) { return b ? "true" : "false"; }
std::string show(int n) { return std::to_string(n); }

template <class A, class B>
void check_eq(const A& got, const B& want, const std::string& what) {
  if (!(got == want)) throw Failure{what + ": got " + show(got) + ", want " + show(want)};
}

FinGenAbGroup C(long n) { return FinGenAbGroup::cyclic(n); }

FinGenAbGroup integral(const FiniteGroup& g, std::size_t n) {
  return group_cohomology(g, GMod::trivial_integers(g), n);
}

LinRedDatum mu(long n) { return {C(n), FiniteGroup::cyclic(1), true}; }
LinRedDatum trivial_band() { return {FinGenAbGroup(), FiniteGroup::cyclic(1), true}; }

RootedCurve rooted(const CurveDescriptor& c, const std::vector<long>& es) {
  RootedCurve r{c, {}};
  for (std::size_t i = 0; i < es.size(); ++i) r.roots.push_back({"x" + std::to_string(i + 1), 1, es[i]});
  return r;
}

std::string value_of(const ExtensionReport& r) {
  check(r.value.has_value(), "no value reported");
  return r.value->to_string();
}

// Invariant factor chains d_1 | d_2 | ... with product at most `bound`.
void chains(long bound, std::vector<long>& cur, std::vector<std::vector<long>>& out) {
  out.push_back(cur);
  long prod = std::accumulate(cur.begin(), cur.end(), 1L, std::multiplies<>());
  long start = cur.empty() ? 2 : cur.back();
  for (long d = start; prod * d <= bound; d += cur.empty() ? 1 : cur.back()) {
    if (!cur.empty() && d % cur.back() != 0) continue;
    cur.push_back(d);
    chains(bound, cur, out);
    cur.pop_back();
  }
}

// H^3(A, Z) = H^2(A, Q/Z) for A = + Z/d_i is + over i < j of Z/gcd(d_i, d_j).
FinGenAbGroup schur_oracle(const std::vector<long>& d) {
  std::vector<Integer> orders;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) orders.push_back(std::gcd(d[i], d[j]));
  return FinGenAbGroup::from_orders(0, orders);
}

void cyclic_table() {
  for (long m = 1; m <= 12; ++m)
    for (std::size_t n = 0; n <= 4; ++n) {
      FinGenAbGroup want = n == 0 ? FinGenAbGroup::free(1) : (n % 2 ? FinGenAbGroup() : C(m));
      check_eq(integral(FiniteGroup::cyclic(m), n), want, "H^" + std::to_string(n) + "(Z/" + std::to_string(m) + ", Z)");
    }
}

void brauerless_iff_cyclic() {
  std::vector<long> cur;
  std::vector<std::vector<long>> all;
  chains(36, cur, all);
  for (const auto& d : all) {
    std::vector<Integer> orders(d.begin(), d.end());
    FinGenAbGroup a = FinGenAbGroup::from_orders(0, orders);
    FiniteGroup g = FiniteGroup::from_abelian(a);
    const std::string name = a.to_string();
    check_eq(brauerless({FinGenAbGroup(), g, true}), d.size() <= 1, "brauerless(" + name + ")");
    check_eq(integral(g, 3), schur_oracle(d), "H^3(" + name + ", Z)");
  }
}

void s3_facts() {
  FiniteGroup s3 = FiniteGroup::symmetric3();
  check_eq(integral(s3, 2), C(2), "H^2(S3, Z)");
  check_eq(integral(s3, 3), FinGenAbGroup(), "H^3(S3, Z)");
  for (std::size_t n : {1, 2}) {
    FinGenAbGroup h = integral(s3, n);
    check(h.free_rank() == 0 && 2 % h.exponent() == 0, "H^" + std::to_string(n) + "(S3, Z) is not 2-torsion");
  }
}

void pic_cl_grid() {
  const auto k = BaseDescriptor::alg_closed(0);
  for (const CurveDescriptor& c : {CurveDescriptor{0, {}, k, "X"}, CurveDescriptor{0, {{"inf", 1}}, k, "X"}}) {
    std::vector<long> es;
    std::function<void()> rec = [&] {
      RootedCurve s = rooted(c, es);
      ExtensionReport r = pic_rooted(s);
      check(r.value && r.value->is_concrete(), "pic_rooted has no concrete value");
      check_eq(r.value->concrete(), cl_stack(s), "Pic vs Cl");
      check_eq(r.facts.at("pullback_index"), s.root_product().get_str(), "torsion index");
      if (es.size() == 4) return;
      for (long e = 2; e <= 6; ++e) {
        es.push_back(e);
        rec();
        es.pop_back();
      }
    };
    rec();
  }
}

void modular_catalogue() {
  for (long q : {3, 5, 7, 9, 11, 25, 27, 49}) {
    auto F = BaseDescriptor::finite_field(q);
    check_eq(value_of(brauer_catalogue(CatalogueName::X1, F)), "0", "Br X(1) over F_" + std::to_string(q));
    check_eq(value_of(brauer_catalogue(CatalogueName::Y1, F)), "Z/12", "Br Y(1) over F_" + std::to_string(q));
  }
  for (int p : {0, 3, 5, 7, 11})
    check_eq(value_of(brauer_catalogue(CatalogueName::Y02, BaseDescriptor::alg_closed(p))), "Z/2",
             "Br Y0(2) in char " + std::to_string(p));
  for (int p : {0, 5, 7, 11})
    check_eq(value_of(brauer_catalogue(CatalogueName::Y1, BaseDescriptor::alg_closed(p))), "0",
             "Br Y(1) in char " + std::to_string(p));
}

void stacky_tsen() {
  const auto k = BaseDescriptor::alg_closed(0);
  const CurveDescriptor elliptic{1, {}, k, "E"};
  for (const std::vector<long>& es : {std::vector<long>{}, {2}, {2, 5}, {4, 7, 8}}) {
    GerbeOverRootedCurve g;
    g.group = mu(3);
    g.rooted = rooted(elliptic, es);
    check_eq(value_of(brauer_stack(g)), "Z/3 ⊕ Z/3", "split mu_3 gerbe over a rooted genus 1 curve");
  }
  for (int genus : {0, 1, 2})
    for (std::size_t punctures : {0, 1, 3})
      for (const std::vector<long>& es : {std::vector<long>{}, {2}, {2, 2}, {3, 4, 6}}) {
        CurveDescriptor c{genus, {}, k, "X"};
        for (std::size_t i = 0; i < punctures; ++i) c.punctures.push_back({"p" + std::to_string(i), 1});
        TrivialGerbe t{trivial_band(), c, k};
        check_eq(value_of(brauer_stack(t)), "0", "trivial gerbe over a curve");
        check_eq(value_of(brauer_stack(rooted(c, es))), "0", "rooted curve");
      }
}

void faddeev_exactness() {
  const auto F5 = BaseDescriptor::finite_field(5);
  const CurveDescriptor p1{0, {}, F5, "P1"};
  const std::vector<RemovedPoint> pool{{"2", 1}, {"3", 1}, {"inf", 1}, {"t^2-2", 2}, {"t^3-t+2", 3}};
  for (const std::vector<long>& es : {std::vector<long>{2, 3}, {3, 4}})
    for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
      std::vector<RemovedPoint> support;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (mask >> i & 1) support.push_back(pool[i]);
      if (es.size() + support.size() > 5) continue;
      StackOptions o;
      o.truncation = 12;
      auto rep = stacky_faddeev_sequence(rooted(p1, es), support, o);
      check(rep.composition_zero, "composition not zero");
      for (std::size_t i = 0; i + 1 < rep.nodes.size(); ++i)
        check(rep.nodes[i].homology.is_trivial(), "homology at " + rep.nodes[i].name + " is " + rep.nodes[i].homology.to_string());
      check(rep.exact && rep.surjective, "sequence not exact on the right");
    }
}

void non_coprime_cokernel() {
  for (long q : {3, 5, 7, 9}) {
    auto F = BaseDescriptor::finite_field(q);
    const long p = F.characteristic;
    const CurveDescriptor p1{0, {}, F, "P1"};
    check_eq(rooted_p1_cokernel({2, 2}), C(2), "coker for (2, 2)");
    ExtensionReport r = brauer_stack(rooted(p1, {2, 2}));
    check_eq(value_of(r), "Z/2", "Br of P1 rooted at (2, 2) over F_" + std::to_string(q));
    check_eq(r.pieces.at(1).to_string(), "Z/2", "cokernel piece");
    for (long a = 2; a <= 7; ++a)
      for (long b = a + 1; b <= 7; ++b) {
        if (std::gcd(a, b) != 1 || a % p == 0 || b % p == 0) continue;
        check_eq(rooted_p1_cokernel({a, b}), FinGenAbGroup(), "coprime cokernel");
        check_eq(value_of(brauer_stack(rooted(p1, {a, b}))), "0", "coprime rooted P1");
      }
  }
}

void gatekeeping() {
  // B mu_2 over the square root of 0 in A^1 has a mu_2 x mu_2 stabilizer.
  const Json in = Json::parse(R"({"kind":"gerbe-rooted","group":"mu_2",
      "curve":{"genus":0,"punctures":[{"label":"inf"}],"base":{"base":"algclosed"}},
      "roots":[{"label":"0","e":2}]})");
  for (int i = 0; i < 3; ++i) {
    auto [report, code] = run_request_safely("brauer", in, {});
    check(!report.result, "a value was reported");
    check(report.error && report.error->kind == "NotLocallyBrauerless", "wrong error kind");
    check_eq(code, 2, "exit code");
  }
}

void open_curve_evaluator() {
  for (long q : {3, 5, 7}) {
    auto F = BaseDescriptor::finite_field(q);
    for (long N = 1; N <= 24; ++N) {
      check_eq(brauer_open_rational({}, F, N), FinGenAbGroup(), "Br P1");
      check_eq(brauer_open_rational({{"inf", 1}}, F, N), FinGenAbGroup(), "Br A1");
      check_eq(brauer_open_rational({{"0", 1}, {"inf", 1}}, F, N), C(N), "Br Gm");
    }
  }
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  void (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "cyclic cohomology table", 10, cyclic_table},
      {2, "Brauerless iff cyclic, H^3 vs Kunneth", 60, brauerless_iff_cyclic},
      {3, "S3 cohomology facts", 30, s3_facts},
      {4, "Pic/Cl agreement on rooted genus 0 grid", 60, pic_cl_grid},
      {5, "modular catalogue", 5, modular_catalogue},
      {6, "stacky Tsen", 5, stacky_tsen},
      {7, "stacky Faddeev exactness", 10, faddeev_exactness},
      {8, "non-coprime cokernel", 5, non_coprime_cokernel},
      {9, "gatekeeping", 1, gatekeeping},
      {10, "open rational curve evaluator", 5, open_curve_evaluator},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run();
    } catch (const Failure& f) {
      detail = f.what;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (detail.empty() && secs > c.limit_s) detail = "over time limit of " + std::to_string(c.limit_s) + " s";
    failed += !detail.empty();
    std::cout << (detail.empty() ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " (" << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s)";
    if (!detail.empty()) std::cout << ": " << detail;
    std::cout << std::endl;
  }
  return failed ? 1 : 0;
}
