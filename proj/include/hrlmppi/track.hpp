#pragma once

#include <string>
#include <vector>

#include "hrlmppi/common.hpp"

namespace hrlmppi {

// Closed piecewise-linear centerline with arc-length lookup and constant
// half-width lane boundaries.
class Track {
 public:
  Track() = default;
  Track(std::vector<Eigen::Vector2d> waypoints, double half_width);

  // Rounded-rectangle loop used when no waypoint file is supplied.
  static Track built_in();
  // One "x y" pair per line; '#' starts a comment.
  static Track from_file(const std::string& path, double half_width = 6.0);

  double length() const { return length_; }
  double half_width() const { return half_width_; }

  Eigen::Vector2d point_at(double s) const;
  Eigen::Vector2d tangent_at(double s) const;
  double heading_at(double s) const;

  struct Projection {
    double s = 0;        // arc length of the closest centerline point
    double lateral = 0;  // signed offset, positive to the left of the tangent
  };
  Projection project(const Eigen::Vector2d& p) const;
  // Restricts the segment search to an arc window around `s_hint`; used in
  // rollout loops where the previous arc position is known.
  Projection project_near(const Eigen::Vector2d& p, double s_hint,
                          double window = 25.0) const;

  // |lateral| / half_width: 0 on the centerline, 1 on the boundary.
  double boundary_proportion(const Eigen::Vector2d& p) const;
  double boundary_proportion_near(const Eigen::Vector2d& p, double s_hint) const;

 private:
  std::vector<Eigen::Vector2d> pts_;
  std::vector<double> cum_;  // arc length at each waypoint
  double length_ = 0;
  double half_width_ = 6.0;
};

}  // namespace hrlmppi
