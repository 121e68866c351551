#pragma once

// Etale cohomology of base schemes: closed forms for concrete bases and
// formal terms for symbolic ones.

#include <map>
#include <string>
#include <vector>

#include "stackbr/abelian.hpp"
#include "stackbr/cohomology.hpp"

namespace stackbr {

enum class BaseKind { AlgClosed, SepClosed, FiniteField, StrictHenselianLocal, Symbolic };

struct BaseDescriptor {
  BaseKind kind = BaseKind::AlgClosed;
  // Field characteristic, or residue characteristic for local rings.
  int characteristic = 0;
  Integer q = 0;  // finite fields only
  bool regular = true;
  bool noetherian = true;
  bool connected = true;
  std::string name = "k";
  std::vector<Integer> invertible;  // symbolic bases only

  static BaseDescriptor alg_closed(int characteristic);
  static BaseDescriptor sep_closed(int characteristic);
  static BaseDescriptor finite_field(const Integer& q);
  static BaseDescriptor strict_henselian(int residue_characteristic, bool regular);
  static BaseDescriptor symbolic(std::string name, std::vector<Integer> invertible, bool regular = true,
                                 bool noetherian = true, bool connected = true);

  bool is_symbolic() const { return kind == BaseKind::Symbolic; }
  bool is_field() const { return kind != BaseKind::StrictHenselianLocal && kind != BaseKind::Symbolic; }
  bool is_separably_closed() const { return kind == BaseKind::AlgClosed || kind == BaseKind::SepClosed; }
  // Concrete bases: n prime to the characteristic.  Symbolic bases: every
  // prime factor of n divides a declared invertible integer.
  bool inverts(const Integer& n) const;
  std::string label() const;
};

enum class CoeffKind { ConstCyclic, Mu, ConstZ, Gm, Sum };

struct EtaleCoeff {
  CoeffKind kind = CoeffKind::ConstZ;
  Integer n = 0;
  EtaleGroupExpr pieces;  // Sum only

  static EtaleCoeff constant(const Integer& n) { return {CoeffKind::ConstCyclic, n, {}}; }
  static EtaleCoeff mu(const Integer& n) { return {CoeffKind::Mu, n, {}}; }
  static EtaleCoeff integers() { return {CoeffKind::ConstZ, 0, {}}; }
  static EtaleCoeff gm() { return {CoeffKind::Gm, 0, {}}; }
  static EtaleCoeff sum(const EtaleGroupExpr& pieces);
  static EtaleCoeff of(const EtalePiece& p);

  std::string to_string() const;
  friend bool operator<(const EtaleCoeff& a, const EtaleCoeff& b);
  friend bool operator==(const EtaleCoeff& a, const EtaleCoeff& b);
};

enum class SpaceKind { Base, AffineLine, PunctLine, ProjLine, Named };

struct Space {
  SpaceKind kind = SpaceKind::Base;
  std::string base;  // label of the base
  std::string name;  // Named spaces

  static Space of_base(const std::string& b) { return {SpaceKind::Base, b, ""}; }
  static Space affine_line(const std::string& b) { return {SpaceKind::AffineLine, b, ""}; }
  static Space punctured_line(const std::string& b) { return {SpaceKind::PunctLine, b, ""}; }
  static Space projective_line(const std::string& b) { return {SpaceKind::ProjLine, b, ""}; }
  static Space named(const std::string& n, const std::string& b) { return {SpaceKind::Named, b, n}; }

  std::string to_string() const;
  friend bool operator<(const Space& a, const Space& b);
  friend bool operator==(const Space& a, const Space& b);
};

enum class TermKind { H, BrPrime, Pic, Jac, Hom, Units, Other };

struct FormalTerm {
  TermKind kind = TermKind::H;
  std::size_t degree = 0;
  Space space;
  EtaleCoeff coeff;
  EtaleCoeff target;  // Hom(coeff, target)
  std::string text;   // Other

  static FormalTerm h(std::size_t degree, Space s, EtaleCoeff c) { return {TermKind::H, degree, s, c, {}, ""}; }
  static FormalTerm brauer(Space s) { return {TermKind::BrPrime, 0, s, {}, {}, ""}; }
  static FormalTerm pic(Space s) { return {TermKind::Pic, 0, s, {}, {}, ""}; }
  static FormalTerm jac(Space s) { return {TermKind::Jac, 0, s, {}, {}, ""}; }
  static FormalTerm hom(Space s, EtaleCoeff from, EtaleCoeff to) { return {TermKind::Hom, 0, s, from, to, ""}; }
  static FormalTerm other(std::string text, Space s) { return {TermKind::Other, 0, s, {}, {}, std::move(text)}; }

  std::string to_string() const;
  friend bool operator<(const FormalTerm& a, const FormalTerm& b);
  friend bool operator==(const FormalTerm& a, const FormalTerm& b);
};

struct EvalContext;

// A concrete group plus formal summands with multiplicities.
class GroupExpr {
 public:
  GroupExpr() = default;
  GroupExpr(FinGenAbGroup g) : concrete_(std::move(g)) {}  // NOLINT: implicit by design
  static GroupExpr term(const FormalTerm& t, std::size_t multiplicity = 1);

  const FinGenAbGroup& concrete() const { return concrete_; }
  const std::map<FormalTerm, std::size_t>& formal() const { return formal_; }
  bool is_concrete() const { return formal_.empty(); }
  bool is_zero() const { return formal_.empty() && concrete_.is_trivial(); }

  GroupExpr& operator+=(const GroupExpr& other);
  friend GroupExpr operator+(GroupExpr a, const GroupExpr& b) { return a += b; }
  friend bool operator==(const GroupExpr& a, const GroupExpr& b) {
    return a.concrete_ == b.concrete_ && a.formal_ == b.formal_;
  }

  // Splits H^i of sums into summands, drops terms with trivial
  // coefficients and merges duplicates into multiplicities.
  GroupExpr simplify() const;
  // Evaluates every term whose space lives over the base labelled `label`.
  GroupExpr substitute(const std::string& label, const BaseDescriptor& base, EvalContext& ctx) const;
  std::string to_string() const;

 private:
  FinGenAbGroup concrete_;
  std::map<FormalTerm, std::size_t> formal_;
};

struct EvalContext {
  bool allow_prime_to_p = false;
  std::vector<std::string> warnings;
  void warn(const std::string& w);
};

// H^i(base, coeff) for i <= 3.
GroupExpr etale_h(const BaseDescriptor& base, const EtaleCoeff& coeff, std::size_t i, EvalContext& ctx);
GroupExpr etale_h(const BaseDescriptor& base, const EtaleCoeff& coeff, std::size_t i);

GroupExpr brauer_of_base(const BaseDescriptor& base);
GroupExpr pic_of_base(const BaseDescriptor& base);

// Value of a single formal term once its base is known; terms that stay
// formal are returned unchanged.
GroupExpr evaluate_term(const FormalTerm& t, const BaseDescriptor& base, EvalContext& ctx);

}  // namespace stackbr
