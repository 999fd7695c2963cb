#pragma once

#include "pdyn/point.hpp"
#include "pdyn/rational.hpp"
#include "pdyn/system.hpp"

#include <map>
#include <variant>
#include <vector>

namespace pdyn {

// Time window of a finite-horizon dynamical ball.
struct WindowSpec {
  enum class Kind { TwoSided, OneSided, Subgroup };
  Kind kind = Kind::TwoSided;
  long long T = 0;
  long long m = 1;  // Subgroup: indices {m*n : |n| <= T}

  std::vector<long long> indices() const;
  static WindowSpec two_sided(long long T) { return {Kind::TwoSided, T, 1}; }
  static WindowSpec one_sided(long long T) { return {Kind::OneSided, T, 1}; }
  static WindowSpec subgroup(long long m, long long T) { return {Kind::Subgroup, T, m}; }
};

// Exact representation on full shifts: the set of sequences matching the
// coordinate constraints. `collapses_in_limit` certifies that the constraint
// set grows without bound in T, i.e. the infinite-horizon ball is exactly
// the center.
struct CylinderRep {
  std::map<long long, char> constraints;
  bool collapses_in_limit = false;
};

// Sampled representation elsewhere. Contains the center; `exhaustive` means
// the candidate pool provably covered every point of the space within delta.
struct ExplicitRep {
  std::vector<PointValue> points;
  int candidates_tested = 0;
  bool exhaustive = false;
};

struct DynamicalBall {
  PointValue center;
  Rat delta;
  WindowSpec window;
  std::variant<CylinderRep, ExplicitRep> rep;

  bool is_cylinder() const { return std::holds_alternative<CylinderRep>(rep); }
  const CylinderRep& cylinder() const { return std::get<CylinderRep>(rep); }
  const ExplicitRep& explicit_rep() const { return std::get<ExplicitRep>(rep); }
};

// max_{n in window} d(f^n x, f^n y); stops early once `stop_above` is exceeded.
Rat window_orbit_max(const System& sys, const PointValue& x, const PointValue& y,
                     const WindowSpec& w, const Rat* stop_above = nullptr);

// d(f^n x, f^n y) <= delta for all n in window
bool within_on_window(const System& sys, const PointValue& x, const PointValue& y,
                      const WindowSpec& w, const Rat& delta);

// Direct membership test against the ball's defining inequalities.
bool ball_contains(const System& sys, const DynamicalBall& ball, const PointValue& y);

// set(a) is contained in set(b) as cylinder sets: every constraint of b
// appears among a's constraints with the same symbol.
bool cylinder_subset(const CylinderRep& a, const CylinderRep& b);

}  // namespace pdyn
