#include "hrlmppi/track.hpp"

#include <fstream>
#include <sstream>

namespace hrlmppi {

Track::Track(std::vector<Eigen::Vector2d> waypoints, double half_width)
    : pts_(std::move(waypoints)), half_width_(half_width) {
  if (pts_.size() < 3) throw ConfigError("track needs at least 3 waypoints");
  cum_.resize(pts_.size() + 1);
  cum_[0] = 0;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    const auto& a = pts_[i];
    const auto& b = pts_[(i + 1) % pts_.size()];
    cum_[i + 1] = cum_[i] + (b - a).norm();
  }
  length_ = cum_.back();
}

Track Track::built_in() {
  // rounded rectangle: 80 m straights, 30 m corner radius
  std::vector<Eigen::Vector2d> pts;
  const double straight = 80.0, radius = 30.0;
  const int arc_n = 12;
  auto arc = [&](Eigen::Vector2d c, double a0, double a1) {
    for (int i = 0; i < arc_n; ++i) {
      const double a = a0 + (a1 - a0) * i / arc_n;
      pts.emplace_back(c.x() + radius * std::cos(a), c.y() + radius * std::sin(a));
    }
  };
  for (int i = 0; i <= 8; ++i) pts.emplace_back(-straight / 2 + straight * i / 9.0, -radius);
  arc({straight / 2, 0.0}, -M_PI_2, M_PI_2);
  for (int i = 0; i <= 8; ++i) pts.emplace_back(straight / 2 - straight * i / 9.0, radius);
  arc({-straight / 2, 0.0}, M_PI_2, 3.0 * M_PI_2);
  return Track(std::move(pts), 6.0);
}

Track Track::from_file(const std::string& path, double half_width) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open track file: " + path);
  std::vector<Eigen::Vector2d> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    double x, y;
    if (ss >> x >> y) {
      pts.emplace_back(x, y);
    } else if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
      throw ConfigError("track file line " + std::to_string(lineno) + ": expected 'x y'");
    }
  }
  return Track(std::move(pts), half_width);
}

Eigen::Vector2d Track::point_at(double s) const {
  s = std::fmod(s, length_);
  if (s < 0) s += length_;
  auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - cum_.begin()) - 1;
  if (i >= pts_.size()) i = pts_.size() - 1;
  const auto& a = pts_[i];
  const auto& b = pts_[(i + 1) % pts_.size()];
  const double seg = cum_[i + 1] - cum_[i];
  const double t = seg > 0 ? (s - cum_[i]) / seg : 0;
  return a + t * (b - a);
}

Eigen::Vector2d Track::tangent_at(double s) const {
  s = std::fmod(s, length_);
  if (s < 0) s += length_;
  auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - cum_.begin()) - 1;
  if (i >= pts_.size()) i = pts_.size() - 1;
  const auto& a = pts_[i];
  const auto& b = pts_[(i + 1) % pts_.size()];
  return (b - a).normalized();
}

double Track::heading_at(double s) const {
  const auto t = tangent_at(s);
  return std::atan2(t.y(), t.x());
}

namespace {
void consider_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                      const Eigen::Vector2d& b, double cum,
                      Track::Projection& best, double& best_d2) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0;
  t = clamp(t, 0.0, 1.0);
  const Eigen::Vector2d q = a + t * ab;
  const double d2 = (p - q).squaredNorm();
  if (d2 < best_d2) {
    best_d2 = d2;
    best.s = cum + t * std::sqrt(len2);
    const Eigen::Vector2d tangent = ab.normalized();
    // positive lateral offset = left of the tangent
    best.lateral = tangent.x() * (p - q).y() - tangent.y() * (p - q).x();
  }
}
}  // namespace

Track::Projection Track::project(const Eigen::Vector2d& p) const {
  Projection best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts_.size(); ++i)
    consider_segment(p, pts_[i], pts_[(i + 1) % pts_.size()], cum_[i], best, best_d2);
  return best;
}

Track::Projection Track::project_near(const Eigen::Vector2d& p, double s_hint,
                                      double window) const {
  s_hint = std::fmod(s_hint, length_);
  if (s_hint < 0) s_hint += length_;
  Projection best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    // arc distance from the hint to this segment, accounting for the wrap
    double d = std::abs(0.5 * (cum_[i] + cum_[i + 1]) - s_hint);
    d = std::min(d, length_ - d);
    if (d > window + (cum_[i + 1] - cum_[i])) continue;
    consider_segment(p, pts_[i], pts_[(i + 1) % pts_.size()], cum_[i], best, best_d2);
  }
  if (!std::isfinite(best_d2)) return project(p);
  return best;
}

double Track::boundary_proportion(const Eigen::Vector2d& p) const {
  return std::abs(project(p).lateral) / half_width_;
}

double Track::boundary_proportion_near(const Eigen::Vector2d& p, double s_hint) const {
  return std::abs(project_near(p, s_hint).lateral) / half_width_;
}

}  // namespace hrlmppi
