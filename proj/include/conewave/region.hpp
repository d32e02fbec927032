#pragma once

#include <string>
#include <vector>

namespace conewave {

enum class SegmentType {
  TimeSliceUp,
  TimeSliceDown,
  CylinderOutward,
  CylinderInward,
  BackwardConeUp,
  BackwardConeDown,
  ForwardConeUp,
  ForwardConeDown,
  TAxis
};

std::string to_string(SegmentType t);
SegmentType segment_type_from_string(const std::string& s);
// Same surface with the opposite orientation.
SegmentType flipped(SegmentType t);

struct Vertex {
  double r = 0.0;
  double t = 0.0;
  bool operator==(const Vertex&) const = default;
};

struct Segment {
  SegmentType type;
  Vertex a;  // start (traversal order)
  Vertex b;  // end
  double t_lo() const { return a.t < b.t ? a.t : b.t; }
  double t_hi() const { return a.t < b.t ? b.t : a.t; }
  double r_lo() const { return a.r < b.r ? a.r : b.r; }
  double r_hi() const { return a.r < b.r ? b.r : a.r; }
};

// Polygon in the (r, t) half-plane, traversed with the region on the left, each edge tagged
// by the orientation of the corresponding boundary surface (outward normal).
struct RegionSpec {
  std::vector<Vertex> vertices;  // open list; the closing edge is implicit
  std::vector<Segment> segments;

  double t_min() const;
  double t_max() const;
  double r_max() const;
  bool has_axis() const;
};

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

// Orients counterclockwise, merges collinear edges, rotates to a canonical start vertex and
// tags segments. Throws ConfigError on fewer than three distinct vertices (open polygon),
// zero area, r < 0, slopes outside {0, ∞, ±1}, or self-intersection.
RegionSpec validate_region(const std::vector<Vertex>& raw);

// r-intervals of the horizontal slice at time t (taken slightly inside the region when t
// hits the top or bottom edge).
std::vector<Interval> slice(const RegionSpec& region, double t);

// Common shapes.
RegionSpec cone_region(double t0, double r0);                       // t ≥ t0, |x|+t ≤ t0+r0
RegionSpec slab_region(double t1, double t2, double radius);        // |x| ≤ radius, t1 ≤ t ≤ t2
RegionSpec cone_shell_region(double t0, double r1, double r2);      // t ≥ t0, t0+r1 ≤ |x|+t ≤ t0+r2
RegionSpec truncated_cone_region(double t0, double r0, double t1);  // cone cut at t = t1
RegionSpec rectangle_region(double r1, double r2, double t1, double t2);

}  // namespace conewave
