// Point clouds over box domains: regular lattice generation, boundary
// tagging with outward normals, and box-shaped support-domain searches.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace rpimc {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int k) { return k == 0 ? x : (k == 1 ? y : z); }
  double operator[](int k) const { return k == 0 ? x : (k == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

struct Box {
  Vec3 lo, hi;
  int dim = 3;

  double edge(int axis) const { return hi[axis] - lo[axis]; }
  bool contains(const Vec3& p, double slack = 0.0) const {
    for (int k = 0; k < dim; ++k)
      if (p[k] < lo[k] - slack || p[k] > hi[k] + slack) return false;
    return true;
  }
};

enum class BoundaryTag : std::uint8_t { interior = 0, dirichlet = 1, neumann = 2 };

// Discretization of a domain: coordinates, boundary tags, unit outward
// normals (zero vectors at interior nodes) and the characteristic spacing h.
struct NodeCloud {
  int dim = 2;
  std::vector<Vec3> positions;
  std::vector<BoundaryTag> tags;
  std::vector<Vec3> normals;
  double spacing = 0.0;
  Box bounds;

  std::size_t size() const { return positions.size(); }
  bool is_boundary(std::size_t i) const { return tags[i] != BoundaryTag::interior; }
  int poly_basis_size() const { return dim + 1; }  // linear basis: 1, x, y(, z)
};

// Lattice of (L_k/h + 1) nodes per axis. Face nodes are tagged dirichlet by
// default (retag with tag_boundaries); edge/corner normals are the
// normalized sum of the adjacent face normals.
// Throws if h is non-positive or does not divide every edge length
// (relative tolerance 1e-9).
NodeCloud generate_regular_grid(const Box& box, double h);

// Faces of an axis-aligned box, in axis-minor order.
enum class Face : int { xmin = 0, xmax, ymin, ymax, zmin, zmax };

struct FaceTags {
  // interior means "unassigned"; every face of the box must be assigned.
  std::array<BoundaryTag, 6> tag{BoundaryTag::interior, BoundaryTag::interior,
                                 BoundaryTag::interior, BoundaryTag::interior,
                                 BoundaryTag::interior, BoundaryTag::interior};

  static FaceTags all(BoundaryTag t) {
    FaceTags f;
    f.tag.fill(t);
    return f;
  }
  FaceTags& set(Face face, BoundaryTag t) {
    tag[static_cast<int>(face)] = t;
    return *this;
  }
};

// Retags boundary nodes by face membership. A node lying on several faces
// with conflicting assignments becomes dirichlet (strong imposition wins).
// Throws if any face of the cloud's bounding box is left unassigned.
NodeCloud tag_boundaries(NodeCloud cloud, const FaceTags& spec);

struct SupportDomain {
  std::size_t center_index = 0;
  std::vector<std::uint32_t> neighbor_indices;  // includes the center node
  Vec3 box_half_widths;
};

// Uniform spatial binning grid over the cloud; bin size = dilatation * h.
// find() returns all nodes inside the axis-aligned box of half-width
// dilatation*h around the center node (inclusive, 1e-9*h slack). If fewer
// than dim+2 nodes are found the box is grown by 10% until the minimum is
// met.
class SupportSearch {
 public:
  SupportSearch(const NodeCloud& cloud, double dilatation);

  SupportDomain find(std::size_t center_index) const;
  double dilatation() const { return dilatation_; }

 private:
  const NodeCloud& cloud_;
  double dilatation_ = 0.0;
  double bin_size_ = 0.0;
  std::array<int, 3> bin_count_{1, 1, 1};
  Vec3 origin_;
  std::vector<std::vector<std::uint32_t>> bins_;

  void collect(const Vec3& center, const Vec3& half, std::vector<std::uint32_t>& out) const;
};

std::vector<SupportDomain> find_all_supports(const NodeCloud& cloud, double dilatation,
                                             int threads = 1);

// Deterministic interior jitter (uniform in [-amplitude, amplitude] per
// axis); boundary nodes, tags and normals are untouched. Used to build
// irregular clouds from the lattice generator.
NodeCloud perturb_interior(NodeCloud cloud, double amplitude, std::uint64_t seed);

// Mean distance to the nearest neighbor, the spacing rule for file-ingested
// clouds.
double mean_nearest_distance(const NodeCloud& cloud);

}  // namespace rpimc
