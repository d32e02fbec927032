#include "conewave/region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conewave/errors.hpp"

namespace conewave {

std::string to_string(SegmentType t) {
  switch (t) {
    case SegmentType::TimeSliceUp: return "TimeSliceUp";
    case SegmentType::TimeSliceDown: return "TimeSliceDown";
    case SegmentType::CylinderOutward: return "CylinderOutward";
    case SegmentType::CylinderInward: return "CylinderInward";
    case SegmentType::BackwardConeUp: return "BackwardConeUp";
    case SegmentType::BackwardConeDown: return "BackwardConeDown";
    case SegmentType::ForwardConeUp: return "ForwardConeUp";
    case SegmentType::ForwardConeDown: return "ForwardConeDown";
    case SegmentType::TAxis: return "TAxis";
  }
  return "?";
}

SegmentType segment_type_from_string(const std::string& s) {
  for (auto t : {SegmentType::TimeSliceUp, SegmentType::TimeSliceDown, SegmentType::CylinderOutward,
                 SegmentType::CylinderInward, SegmentType::BackwardConeUp, SegmentType::BackwardConeDown,
                 SegmentType::ForwardConeUp, SegmentType::ForwardConeDown, SegmentType::TAxis}) {
    if (to_string(t) == s) return t;
  }
  throw ConfigError("unknown segment type '" + s + "'");
}

SegmentType flipped(SegmentType t) {
  switch (t) {
    case SegmentType::TimeSliceUp: return SegmentType::TimeSliceDown;
    case SegmentType::TimeSliceDown: return SegmentType::TimeSliceUp;
    case SegmentType::CylinderOutward: return SegmentType::CylinderInward;
    case SegmentType::CylinderInward: return SegmentType::CylinderOutward;
    case SegmentType::BackwardConeUp: return SegmentType::BackwardConeDown;
    case SegmentType::BackwardConeDown: return SegmentType::BackwardConeUp;
    case SegmentType::ForwardConeUp: return SegmentType::ForwardConeDown;
    case SegmentType::ForwardConeDown: return SegmentType::ForwardConeUp;
    case SegmentType::TAxis: return SegmentType::TAxis;
  }
  return t;
}

double RegionSpec::t_min() const {
  double v = vertices.at(0).t;
  for (const auto& p : vertices) v = std::min(v, p.t);
  return v;
}
double RegionSpec::t_max() const {
  double v = vertices.at(0).t;
  for (const auto& p : vertices) v = std::max(v, p.t);
  return v;
}
double RegionSpec::r_max() const {
  double v = 0.0;
  for (const auto& p : vertices) v = std::max(v, p.r);
  return v;
}
bool RegionSpec::has_axis() const {
  return std::any_of(segments.begin(), segments.end(),
                     [](const Segment& s) { return s.type == SegmentType::TAxis; });
}

namespace {

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

int sgn(double v, double eps) { return v > eps ? 1 : (v < -eps ? -1 : 0); }

bool on_segment(const Vertex& p, const Vertex& a, const Vertex& b, double eps) {
  return std::min(a.r, b.r) - eps <= p.r && p.r <= std::max(a.r, b.r) + eps &&
         std::min(a.t, b.t) - eps <= p.t && p.t <= std::max(a.t, b.t) + eps;
}

bool segments_touch(const Vertex& a, const Vertex& b, const Vertex& c, const Vertex& d, double eps) {
  const double scale = 1e-12 * std::hypot(b.r - a.r, b.t - a.t) * std::hypot(d.r - c.r, d.t - c.t);
  const int o1 = sgn(cross(b.r - a.r, b.t - a.t, c.r - a.r, c.t - a.t), scale);
  const int o2 = sgn(cross(b.r - a.r, b.t - a.t, d.r - a.r, d.t - a.t), scale);
  const int o3 = sgn(cross(d.r - c.r, d.t - c.t, a.r - c.r, a.t - c.t), scale);
  const int o4 = sgn(cross(d.r - c.r, d.t - c.t, b.r - c.r, b.t - c.t), scale);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(c, a, b, eps)) return true;
  if (o2 == 0 && on_segment(d, a, b, eps)) return true;
  if (o3 == 0 && on_segment(a, c, d, eps)) return true;
  if (o4 == 0 && on_segment(b, c, d, eps)) return true;
  return false;
}

SegmentType classify(const Vertex& a, const Vertex& b, double eps) {
  const double dr = b.r - a.r, dt = b.t - a.t;
  const bool hz = std::fabs(dt) <= eps, vt = std::fabs(dr) <= eps;
  if (hz && vt) throw ConfigError("zero-length region edge");
  if (hz) return dr > 0 ? SegmentType::TimeSliceDown : SegmentType::TimeSliceUp;
  if (vt) {
    if (dt > 0) {
      if (a.r <= eps) throw ConfigError("region lies on the wrong side of the t-axis");
      return SegmentType::CylinderOutward;
    }
    return a.r <= eps ? SegmentType::TAxis : SegmentType::CylinderInward;
  }
  if (std::fabs(std::fabs(dr) - std::fabs(dt)) > eps * std::max(1.0, std::fabs(dr)))
    throw ConfigError("region edge slope must be 0, infinite or ±1");
  if (dr < 0 && dt > 0) return SegmentType::BackwardConeUp;
  if (dr > 0 && dt < 0) return SegmentType::BackwardConeDown;
  if (dr > 0 && dt > 0) return SegmentType::ForwardConeDown;
  return SegmentType::ForwardConeUp;
}

}  // namespace

RegionSpec validate_region(const std::vector<Vertex>& raw) {
  double scale = 1.0;
  for (const auto& v : raw) scale = std::max({scale, std::fabs(v.r), std::fabs(v.t)});
  const double eps = 1e-12 * scale;
  auto same = [&](const Vertex& a, const Vertex& b) {
    return std::fabs(a.r - b.r) <= eps && std::fabs(a.t - b.t) <= eps;
  };

  std::vector<Vertex> v;
  for (const auto& p : raw) {
    if (!std::isfinite(p.r) || !std::isfinite(p.t)) throw ConfigError("non-finite region vertex");
    if (p.r < -eps) throw ConfigError("region vertex with r < 0");
    Vertex q{std::max(0.0, p.r), p.t};
    if (v.empty() || !same(v.back(), q)) v.push_back(q);
  }
  while (v.size() > 1 && same(v.front(), v.back())) v.pop_back();
  if (v.size() < 3) throw ConfigError("open polygon: a region needs at least three distinct vertices");

  // merge collinear consecutive edges; a reversal (spike) is a self-intersection
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const Vertex& a = v[(k + v.size() - 1) % v.size()];
      const Vertex& b = v[k];
      const Vertex& c = v[(k + 1) % v.size()];
      const double cr = cross(b.r - a.r, b.t - a.t, c.r - b.r, c.t - b.t);
      const double lab = std::hypot(b.r - a.r, b.t - a.t), lbc = std::hypot(c.r - b.r, c.t - b.t);
      if (std::fabs(cr) <= 1e-12 * lab * lbc) {
        const double dot = (b.r - a.r) * (c.r - b.r) + (b.t - a.t) * (c.t - b.t);
        if (dot < 0) throw ConfigError("self-intersecting region boundary");
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
    }
  }
  if (v.size() < 3) throw ConfigError("open polygon: region has zero area");

  double area2 = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Vertex& a = v[k];
    const Vertex& b = v[(k + 1) % v.size()];
    area2 += a.r * b.t - b.r * a.t;
  }
  if (std::fabs(area2) <= eps * eps) throw ConfigError("open polygon: region has zero area");
  if (area2 < 0) std::reverse(v.begin(), v.end());

  // canonical start: lowest t, then lowest r
  const auto start = std::min_element(v.begin(), v.end(), [&](const Vertex& a, const Vertex& b) {
    if (std::fabs(a.t - b.t) > eps) return a.t < b.t;
    return a.r < b.r;
  });
  std::rotate(v.begin(), start, v.end());

  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_touch(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n], eps))
        throw ConfigError("self-intersecting region boundary");
    }
  }

  RegionSpec out;
  out.vertices = v;
  for (std::size_t k = 0; k < n; ++k) {
    const Vertex& a = v[k];
    const Vertex& b = v[(k + 1) % n];
    out.segments.push_back(Segment{classify(a, b, eps), a, b});
  }
  return out;
}

std::vector<Interval> slice(const RegionSpec& region, double t) {
  const double lo = region.t_min(), hi = region.t_max();
  const double delta = 1e-9 * std::max(1.0, hi - lo);
  if (t < lo - delta || t > hi + delta) return {};
  t = std::clamp(t, lo + delta, hi - delta);
  std::vector<double> xs;
  for (const auto& s : region.segments) {
    const double ta = s.a.t, tb = s.b.t;
    if (ta == tb) continue;
    const double e0 = std::min(ta, tb), e1 = std::max(ta, tb);
    if (t < e0 || t >= e1) continue;
    const double f = (t - ta) / (tb - ta);
    xs.push_back(s.a.r + f * (s.b.r - s.a.r));
  }
  std::sort(xs.begin(), xs.end());
  std::vector<Interval> out;
  for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
    if (xs[k + 1] > xs[k]) out.push_back({std::max(0.0, xs[k]), xs[k + 1]});
  }
  return out;
}

RegionSpec cone_region(double t0, double r0) {
  return validate_region({{0.0, t0}, {r0, t0}, {0.0, t0 + r0}});
}

RegionSpec slab_region(double t1, double t2, double radius) {
  return validate_region({{0.0, t1}, {radius, t1}, {radius, t2}, {0.0, t2}});
}

RegionSpec cone_shell_region(double t0, double r1, double r2) {
  return validate_region({{r1, t0}, {r2, t0}, {0.0, t0 + r2}, {0.0, t0 + r1}});
}

RegionSpec truncated_cone_region(double t0, double r0, double t1) {
  if (!(t1 > t0 && t1 < t0 + r0)) throw ConfigError("truncation time must lie strictly inside the cone");
  return validate_region({{0.0, t0}, {r0, t0}, {r0 - (t1 - t0), t1}, {0.0, t1}});
}

RegionSpec rectangle_region(double r1, double r2, double t1, double t2) {
  return validate_region({{r1, t1}, {r2, t1}, {r2, t2}, {r1, t2}});
}

}  // namespace conewave
