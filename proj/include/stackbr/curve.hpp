#pragma once

// Cohomology of smooth curves over a base, proper or with punctures.

#include <string>
#include <vector>

#include "stackbr/base.hpp"

namespace stackbr {

struct Puncture {
  std::string label;
  int degree = 1;
};

struct CurveDescriptor {
  int genus = 0;
  std::vector<Puncture> punctures;
  BaseDescriptor base;
  std::string name = "X";

  bool proper() const { return punctures.empty(); }
  // Number of geometric points removed.
  int removed_points() const;
  // ValidationError on negative genus, duplicate labels or bad degrees.
  void validate() const;
  Space space() const { return Space::named(name, base.label()); }
};

// H^1(X, coeff) for finite constant or mu coefficients and sums of them.
// Over separably closed fields: (Z/n)^{2g} when proper, (Z/n)^{2g+r-1}
// otherwise.  Strictly henselian bases are handled for proper curves.
GroupExpr h1_curve(const CurveDescriptor& x, const EtaleCoeff& coeff, EvalContext& ctx);
GroupExpr h1_curve(const CurveDescriptor& x, const EtaleCoeff& coeff);

// O*(X)/n for genus 0 curves over separably closed fields.
GroupExpr units_mod_n(const CurveDescriptor& x, const Integer& n);

GroupExpr pic_curve(const CurveDescriptor& x);

}  // namespace stackbr
