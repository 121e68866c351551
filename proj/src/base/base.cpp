#include <algorithm>
#include <tuple>

#include "stackbr/base.hpp"
#include "stackbr/errors.hpp"

namespace stackbr {

namespace {

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void check_characteristic(int p) {
  if (p != 0 && !is_prime(p)) throw BadCharacteristic("characteristic " + std::to_string(p) + " is not 0 or a prime");
}

Integer gcd_of(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer prime_to_p(Integer n, int p) {
  if (p <= 1) return n;
  while (n % p == 0) n /= p;
  return n;
}

int coeff_rank(CoeffKind k) { return static_cast<int>(k); }

}  // namespace

BaseDescriptor BaseDescriptor::alg_closed(int characteristic) {
  check_characteristic(characteristic);
  BaseDescriptor b;
  b.kind = BaseKind::AlgClosed;
  b.characteristic = characteristic;
  b.name = "k";
  return b;
}

BaseDescriptor BaseDescriptor::sep_closed(int characteristic) {
  check_characteristic(characteristic);
  BaseDescriptor b;
  b.kind = BaseKind::SepClosed;
  b.characteristic = characteristic;
  b.name = "k_s";
  return b;
}

BaseDescriptor BaseDescriptor::finite_field(const Integer& q) {
  if (q < 2 || !q.fits_slong_p()) throw BadCharacteristic("finite field size " + q.get_str() + " is out of range");
  long n = q.get_si();
  long p = 2;
  while (n % p != 0) ++p;
  while (n % p == 0) n /= p;
  if (n != 1) throw BadCharacteristic("finite field size " + q.get_str() + " is not a prime power");
  BaseDescriptor b;
  b.kind = BaseKind::FiniteField;
  b.characteristic = static_cast<int>(p);
  b.q = q;
  b.name = "F_" + q.get_str();
  return b;
}

BaseDescriptor BaseDescriptor::strict_henselian(int residue_characteristic, bool regular) {
  check_characteristic(residue_characteristic);
  BaseDescriptor b;
  b.kind = BaseKind::StrictHenselianLocal;
  b.characteristic = residue_characteristic;
  b.regular = regular;
  b.name = "R";
  return b;
}

BaseDescriptor BaseDescriptor::symbolic(std::string name, std::vector<Integer> invertible, bool regular,
                                        bool noetherian, bool connected) {
  if (name.empty()) throw ValidationError("symbolic base needs a name");
  BaseDescriptor b;
  b.kind = BaseKind::Symbolic;
  b.name = std::move(name);
  b.invertible = std::move(invertible);
  b.regular = regular;
  b.noetherian = noetherian;
  b.connected = connected;
  return b;
}

bool BaseDescriptor::inverts(const Integer& n) const {
  if (n == 0) return false;
  if (!is_symbolic()) return characteristic == 0 || n % characteristic != 0;
  Integer rest = abs(n);
  for (const Integer& u : invertible) {
    Integer g = gcd_of(rest, u);
    while (g > 1) {
      rest /= g;
      g = gcd_of(rest, u);
    }
  }
  return rest == 1;
}

std::string BaseDescriptor::label() const { return name; }

EtaleCoeff EtaleCoeff::sum(const EtaleGroupExpr& pieces) {
  EtaleCoeff c{CoeffKind::Sum, 0, pieces};
  std::sort(c.pieces.begin(), c.pieces.end());
  return c;
}

EtaleCoeff EtaleCoeff::of(const EtalePiece& p) {
  if (p.tag == EtaleTag::MuType) return mu(p.n);
  return p.n == 0 ? integers() : constant(p.n);
}

std::string EtaleCoeff::to_string() const {
  switch (kind) {
    case CoeffKind::ConstCyclic: return "Z/" + n.get_str();
    case CoeffKind::Mu: return "mu_" + n.get_str();
    case CoeffKind::ConstZ: return "Z";
    case CoeffKind::Gm: return "Gm";
    case CoeffKind::Sum: {
      if (pieces.empty()) return "0";
      std::string out;
      for (const auto& p : pieces) out += (out.empty() ? "" : " x ") + p.to_string();
      return out;
    }
  }
  return "?";
}

bool operator<(const EtaleCoeff& a, const EtaleCoeff& b) {
  if (a.kind != b.kind) return coeff_rank(a.kind) < coeff_rank(b.kind);
  if (a.n != b.n) return a.n < b.n;
  return a.pieces < b.pieces;
}

bool operator==(const EtaleCoeff& a, const EtaleCoeff& b) {
  return a.kind == b.kind && a.n == b.n && a.pieces == b.pieces;
}

std::string Space::to_string() const {
  switch (kind) {
    case SpaceKind::Base: return base;
    case SpaceKind::AffineLine: return "A1_" + base;
    case SpaceKind::PunctLine: return "A1_" + base + " \\ {0}";
    case SpaceKind::ProjLine: return "P1_" + base;
    case SpaceKind::Named: return name;
  }
  return "?";
}

bool operator<(const Space& a, const Space& b) {
  return std::tie(a.kind, a.base, a.name) < std::tie(b.kind, b.base, b.name);
}

bool operator==(const Space& a, const Space& b) {
  return a.kind == b.kind && a.base == b.base && a.name == b.name;
}

std::string FormalTerm::to_string() const {
  const std::string s = space.to_string();
  switch (kind) {
    case TermKind::H: return "H^" + std::to_string(degree) + "(" + s + ", " + coeff.to_string() + ")";
    case TermKind::BrPrime: return "Br'(" + s + ")";
    case TermKind::Pic: return "Pic(" + s + ")";
    case TermKind::Jac: return "Jac(" + s + ")";
    case TermKind::Hom: return "Hom_" + s + "(" + coeff.to_string() + ", " + target.to_string() + ")";
    case TermKind::Units: return "O*(" + s + ")";
    case TermKind::Other: return text;
  }
  return "?";
}

bool operator<(const FormalTerm& a, const FormalTerm& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  if (a.degree != b.degree) return a.degree < b.degree;
  if (!(a.space == b.space)) return a.space < b.space;
  if (!(a.coeff == b.coeff)) return a.coeff < b.coeff;
  if (!(a.target == b.target)) return a.target < b.target;
  return a.text < b.text;
}

bool operator==(const FormalTerm& a, const FormalTerm& b) {
  return a.kind == b.kind && a.degree == b.degree && a.space == b.space && a.coeff == b.coeff &&
         a.target == b.target && a.text == b.text;
}

GroupExpr GroupExpr::term(const FormalTerm& t, std::size_t multiplicity) {
  GroupExpr e;
  if (multiplicity > 0) e.formal_[t] = multiplicity;
  return e;
}

GroupExpr& GroupExpr::operator+=(const GroupExpr& other) {
  concrete_ = direct_sum(concrete_, other.concrete_);
  for (const auto& [t, m] : other.formal_) formal_[t] += m;
  return *this;
}

GroupExpr GroupExpr::simplify() const {
  GroupExpr out(concrete_);
  for (const auto& [t, m] : formal_) {
    if (m == 0) continue;
    if (t.kind == TermKind::H && t.coeff.kind == CoeffKind::Sum) {
      for (const auto& p : t.coeff.pieces) {
        GroupExpr piece = GroupExpr::term(FormalTerm::h(t.degree, t.space, EtaleCoeff::of(p)), m).simplify();
        out += piece;
      }
      continue;
    }
    if (t.kind == TermKind::H && (t.coeff.kind == CoeffKind::ConstCyclic || t.coeff.kind == CoeffKind::Mu) &&
        t.coeff.n == 1)
      continue;
    if (t.kind == TermKind::Hom && t.coeff.kind != CoeffKind::Sum && t.target.kind != CoeffKind::Sum &&
        t.coeff.n != 0 && t.target.n != 0 && gcd_of(t.coeff.n, t.target.n) == 1)
      continue;
    out.formal_[t] += m;
  }
  return out;
}

GroupExpr GroupExpr::substitute(const std::string& label, const BaseDescriptor& base, EvalContext& ctx) const {
  GroupExpr simple = simplify();
  GroupExpr out(simple.concrete_);
  for (const auto& [t, m] : simple.formal_) {
    if (t.space.base != label) {
      out.formal_[t] += m;
      continue;
    }
    GroupExpr v = evaluate_term(t, base, ctx);
    // Terms that stay formal now live over the substituted base.
    GroupExpr relabelled(v.concrete_);
    for (const auto& [term, k] : v.formal_) {
      FormalTerm u = term;
      if (u.space.base == label) u.space.base = base.label();
      relabelled.formal_[u] += k;
    }
    for (std::size_t i = 0; i < m; ++i) out += relabelled;
  }
  return out.simplify();
}

std::string GroupExpr::to_string() const {
  std::string out = concrete_.is_trivial() ? "" : concrete_.to_string();
  for (const auto& [t, m] : formal_) {
    if (m == 0) continue;
    if (!out.empty()) out += " ⊕ ";
    out += t.to_string();
    if (m > 1) out += "^⊕" + std::to_string(m);
  }
  return out.empty() ? "0" : out;
}

void EvalContext::warn(const std::string& w) {
  if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
}

namespace {

// Replaces n by its prime-to-p part when allowed, else rejects it.
Integer tame_order(const BaseDescriptor& base, const Integer& n, const std::string& what, EvalContext& ctx) {
  const int p = base.characteristic;
  if (base.is_symbolic() || p == 0 || n % p != 0) return n;
  if (!ctx.allow_prime_to_p)
    throw BadCharacteristic(what + " with n = " + n.get_str() + " in characteristic " + std::to_string(p));
  Integer m = prime_to_p(n, p);
  ctx.warn("prime-to-p part only: " + what + " with n = " + n.get_str() + " replaced by n = " + m.get_str());
  return m;
}

GroupExpr formal_h(const BaseDescriptor& base, const EtaleCoeff& coeff, std::size_t i) {
  return GroupExpr::term(FormalTerm::h(i, Space::of_base(base.label()), coeff));
}

}  // namespace

GroupExpr etale_h(const BaseDescriptor& base, const EtaleCoeff& coeff, std::size_t i, EvalContext& ctx) {
  if (i > 3) throw ValidationError("etale cohomology is tabulated up to degree 3");
  if (coeff.kind == CoeffKind::Sum) {
    GroupExpr out;
    for (const auto& p : coeff.pieces) out += etale_h(base, EtaleCoeff::of(p), i, ctx);
    return out;
  }
  if ((coeff.kind == CoeffKind::ConstCyclic || coeff.kind == CoeffKind::Mu) && coeff.n < 1)
    throw ValidationError("cyclic coefficient order must be positive");
  Integer n = coeff.n;
  if (coeff.kind == CoeffKind::Mu) n = tame_order(base, n, "mu_n coefficients", ctx);
  const FinGenAbGroup zero;

  switch (base.kind) {
    case BaseKind::AlgClosed:
    case BaseKind::SepClosed:
    case BaseKind::StrictHenselianLocal: {
      if (i == 0) {
        switch (coeff.kind) {
          case CoeffKind::ConstCyclic:
          case CoeffKind::Mu: return FinGenAbGroup::cyclic(n);
          case CoeffKind::ConstZ: return FinGenAbGroup::free(1);
          default: return GroupExpr::term(FormalTerm{TermKind::Units, 0, Space::of_base(base.label()), {}, {}, ""});
        }
      }
      if (coeff.kind == CoeffKind::Gm && i == 3 && base.kind == BaseKind::StrictHenselianLocal)
        return formal_h(base, coeff, i);
      return zero;
    }
    case BaseKind::FiniteField: {
      const Integer units = base.q - 1;
      switch (coeff.kind) {
        case CoeffKind::ConstCyclic: return i <= 1 ? FinGenAbGroup::cyclic(n) : zero;
        case CoeffKind::Mu: return i <= 1 ? FinGenAbGroup::cyclic(gcd_of(n, units)) : zero;
        case CoeffKind::ConstZ:
          if (i == 0) return FinGenAbGroup::free(1);
          // H^2(F_q, Z) = H^1(F_q, Q/Z) = Q/Z is not finitely generated.
          if (i == 2) return formal_h(base, coeff, i);
          return zero;
        case CoeffKind::Gm: return i == 0 ? FinGenAbGroup::cyclic(units) : zero;
        default: break;
      }
      break;
    }
    case BaseKind::Symbolic: {
      if (i == 0 && base.connected) {
        if (coeff.kind == CoeffKind::ConstCyclic) return FinGenAbGroup::cyclic(n);
        if (coeff.kind == CoeffKind::ConstZ) return FinGenAbGroup::free(1);
      }
      return formal_h(base, coeff, i);
    }
  }
  throw Unsupported("no closed form for H^" + std::to_string(i) + " with coefficients " + coeff.to_string());
}

GroupExpr etale_h(const BaseDescriptor& base, const EtaleCoeff& coeff, std::size_t i) {
  EvalContext ctx;
  return etale_h(base, coeff, i, ctx);
}

GroupExpr brauer_of_base(const BaseDescriptor& base) {
  if (base.is_symbolic()) return GroupExpr::term(FormalTerm::brauer(Space::of_base(base.label())));
  return FinGenAbGroup();
}

GroupExpr pic_of_base(const BaseDescriptor& base) {
  if (base.is_symbolic()) return GroupExpr::term(FormalTerm::pic(Space::of_base(base.label())));
  return FinGenAbGroup();
}

namespace {

// Br of a line over a perfect field agrees with that of the field.
bool perfect_field(const BaseDescriptor& b) {
  return b.kind == BaseKind::AlgClosed || b.kind == BaseKind::FiniteField ||
         (b.kind == BaseKind::SepClosed && b.characteristic == 0);
}

}  // namespace

GroupExpr evaluate_term(const FormalTerm& t, const BaseDescriptor& base, EvalContext& ctx) {
  GroupExpr unchanged = GroupExpr::term(t);
  if (base.is_symbolic()) {
    if (t.kind == TermKind::H && t.space.kind == SpaceKind::Base) return etale_h(base, t.coeff, t.degree, ctx);
    return unchanged;
  }
  switch (t.kind) {
    case TermKind::H:
      if (t.space.kind == SpaceKind::Base) return etale_h(base, t.coeff, t.degree, ctx);
      return unchanged;
    case TermKind::BrPrime:
      switch (t.space.kind) {
        case SpaceKind::Base:
        case SpaceKind::ProjLine: return brauer_of_base(base);
        case SpaceKind::AffineLine: return perfect_field(base) ? brauer_of_base(base) : unchanged;
        case SpaceKind::PunctLine:
          if (base.kind == BaseKind::AlgClosed || (base.kind == BaseKind::SepClosed && base.characteristic == 0))
            return FinGenAbGroup();
          return unchanged;
        case SpaceKind::Named: return unchanged;
      }
      break;
    case TermKind::Pic:
      if (t.space.kind == SpaceKind::Base) return pic_of_base(base);
      return unchanged;
    case TermKind::Hom: {
      if (t.space.kind != SpaceKind::Base) return unchanged;
      const auto finite = [](const EtaleCoeff& c) { return c.kind == CoeffKind::ConstCyclic || c.kind == CoeffKind::Mu; };
      if (!finite(t.coeff) || !finite(t.target)) return unchanged;
      Integer g = gcd_of(t.coeff.n, t.target.n);
      // Hom between cyclic groups of the same type is constant; between a
      // constant group and mu it is mu_g, and H^0 of mu_g and its dual agree.
      EtaleCoeff inner = t.coeff.kind == t.target.kind ? EtaleCoeff::constant(g) : EtaleCoeff::mu(g);
      return etale_h(base, inner, 0, ctx);
    }
    default: return unchanged;
  }
  return unchanged;
}

}  // namespace stackbr
