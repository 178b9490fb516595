#include "rpimc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "rpimc/parallel.hpp"

namespace rpimc {

namespace {

constexpr double kFaceTol = 1e-9;

int axis_count(const Box& box, double h, int axis) {
  const double length = box.edge(axis);
  if (length <= 0.0) throw std::invalid_argument("box edge length must be positive");
  const double intervals = length / h;
  const long long n = std::llround(intervals);
  if (n < 1 || std::abs(n * h - length) > 1e-9 * length)
    throw std::invalid_argument("spacing h does not divide the box edge length");
  return static_cast<int>(n);
}

}  // namespace

NodeCloud generate_regular_grid(const Box& box, double h) {
  if (h <= 0.0) throw std::invalid_argument("spacing h must be positive");
  if (box.dim != 2 && box.dim != 3) throw std::invalid_argument("dimension must be 2 or 3");

  std::array<int, 3> n{1, 1, 1};
  for (int k = 0; k < box.dim; ++k) n[k] = axis_count(box, h, k);

  NodeCloud cloud;
  cloud.dim = box.dim;
  cloud.spacing = h;
  cloud.bounds = box;
  const std::size_t total = std::size_t(n[0] + 1) * std::size_t(n[1] + 1) *
                            std::size_t(box.dim == 3 ? n[2] + 1 : 1);
  cloud.positions.reserve(total);
  cloud.tags.reserve(total);
  cloud.normals.reserve(total);

  const int nz = box.dim == 3 ? n[2] : 0;
  for (int kz = 0; kz <= nz; ++kz) {
    for (int ky = 0; ky <= n[1]; ++ky) {
      for (int kx = 0; kx <= n[0]; ++kx) {
        const std::array<int, 3> idx{kx, ky, kz};
        Vec3 p;
        Vec3 normal;
        bool boundary = false;
        for (int a = 0; a < box.dim; ++a) {
          p[a] = idx[a] == n[a] ? box.hi[a] : box.lo[a] + idx[a] * h;
          if (idx[a] == 0) {
            normal[a] -= 1.0;
            boundary = true;
          }
          if (idx[a] == n[a]) {
            normal[a] += 1.0;
            boundary = true;
          }
        }
        cloud.positions.push_back(p);
        cloud.tags.push_back(boundary ? BoundaryTag::dirichlet : BoundaryTag::interior);
        cloud.normals.push_back(boundary ? normal.normalized() : Vec3{});
      }
    }
  }
  return cloud;
}

NodeCloud tag_boundaries(NodeCloud cloud, const FaceTags& spec) {
  for (int k = 0; k < cloud.dim; ++k) {
    for (int side = 0; side < 2; ++side) {
      const BoundaryTag t = spec.tag[2 * k + side];
      if (t == BoundaryTag::interior)
        throw std::invalid_argument("face " + std::to_string(2 * k + side) +
                                    " has no boundary condition assigned");
    }
  }
  const double tol = kFaceTol * std::max(cloud.spacing, 1.0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!cloud.is_boundary(i)) continue;
    bool dirichlet = false, neumann = false;
    for (int k = 0; k < cloud.dim; ++k) {
      if (std::abs(cloud.positions[i][k] - cloud.bounds.lo[k]) <= tol) {
        (spec.tag[2 * k] == BoundaryTag::dirichlet ? dirichlet : neumann) = true;
      }
      if (std::abs(cloud.positions[i][k] - cloud.bounds.hi[k]) <= tol) {
        (spec.tag[2 * k + 1] == BoundaryTag::dirichlet ? dirichlet : neumann) = true;
      }
    }
    // dirichlet dominates at shared edges/corners
    cloud.tags[i] = dirichlet ? BoundaryTag::dirichlet
                              : (neumann ? BoundaryTag::neumann : cloud.tags[i]);
  }
  return cloud;
}

SupportSearch::SupportSearch(const NodeCloud& cloud, double dilatation)
    : cloud_(cloud), dilatation_(dilatation) {
  if (dilatation < 1.0) throw std::invalid_argument("dilatation coefficient must be >= 1");
  if (cloud.size() < std::size_t(cloud.poly_basis_size()) + 1)
    throw std::invalid_argument("cloud smaller than the minimum support size");
  bin_size_ = dilatation * cloud.spacing;
  origin_ = cloud.bounds.lo;
  std::size_t total = 1;
  for (int k = 0; k < cloud.dim; ++k) {
    bin_count_[k] =
        std::max(1, static_cast<int>(std::floor(cloud.bounds.edge(k) / bin_size_)) + 1);
    total *= std::size_t(bin_count_[k]);
  }
  bins_.assign(total, {});
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    std::size_t bin = 0, stride = 1;
    for (int k = 0; k < cloud.dim; ++k) {
      int b = static_cast<int>(std::floor((p[k] - origin_[k]) / bin_size_));
      b = std::clamp(b, 0, bin_count_[k] - 1);
      bin += stride * std::size_t(b);
      stride *= std::size_t(bin_count_[k]);
    }
    bins_[bin].push_back(static_cast<std::uint32_t>(i));
  }
}

void SupportSearch::collect(const Vec3& center, const Vec3& half,
                            std::vector<std::uint32_t>& out) const {
  const double slack = kFaceTol * cloud_.spacing;
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int k = 0; k < cloud_.dim; ++k) {
    lo[k] = std::clamp(
        static_cast<int>(std::floor((center[k] - half[k] - slack - origin_[k]) / bin_size_)), 0,
        bin_count_[k] - 1);
    hi[k] = std::clamp(
        static_cast<int>(std::floor((center[k] + half[k] + slack - origin_[k]) / bin_size_)), 0,
        bin_count_[k] - 1);
  }
  out.clear();
  const int zlo = cloud_.dim == 3 ? lo[2] : 0;
  const int zhi = cloud_.dim == 3 ? hi[2] : 0;
  for (int bz = zlo; bz <= zhi; ++bz) {
    for (int by = lo[1]; by <= hi[1]; ++by) {
      for (int bx = lo[0]; bx <= hi[0]; ++bx) {
        std::size_t bin = std::size_t(bx) + std::size_t(bin_count_[0]) *
                                                (std::size_t(by) +
                                                 std::size_t(bin_count_[1]) * std::size_t(bz));
        for (std::uint32_t idx : bins_[bin]) {
          const Vec3& p = cloud_.positions[idx];
          bool inside = true;
          for (int k = 0; k < cloud_.dim; ++k) {
            if (std::abs(p[k] - center[k]) > half[k] + slack) {
              inside = false;
              break;
            }
          }
          if (inside) out.push_back(idx);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
}

SupportDomain SupportSearch::find(std::size_t center_index) const {
  SupportDomain support;
  support.center_index = center_index;
  const Vec3& center = cloud_.positions[center_index];
  const double base = dilatation_ * cloud_.spacing;
  Vec3 half{base, base, cloud_.dim == 3 ? base : 0.0};
  const std::size_t minimum = std::size_t(cloud_.poly_basis_size()) + 1;

  collect(center, half, support.neighbor_indices);
  while (support.neighbor_indices.size() < minimum) {
    for (int k = 0; k < cloud_.dim; ++k) half[k] *= 1.1;
    collect(center, half, support.neighbor_indices);
  }
  support.box_half_widths = half;
  return support;
}

std::vector<SupportDomain> find_all_supports(const NodeCloud& cloud, double dilatation,
                                             int threads) {
  SupportSearch search(cloud, dilatation);
  std::vector<SupportDomain> supports(cloud.size());
  parallel_for(cloud.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) supports[i] = search.find(i);
  });
  return supports;
}

NodeCloud perturb_interior(NodeCloud cloud, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };  // [0, 1)
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (cloud.is_boundary(i)) continue;
    for (int k = 0; k < cloud.dim; ++k)
      cloud.positions[i][k] += amplitude * (2.0 * unit() - 1.0);
  }
  return cloud;
}

double mean_nearest_distance(const NodeCloud& cloud) {
  if (cloud.size() < 2) throw std::invalid_argument("need at least two nodes");
  double sum = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double best = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      if (i == j) continue;
      best = std::min(best, (cloud.positions[i] - cloud.positions[j]).norm());
    }
    sum += best;
  }
  return sum / double(cloud.size());
}

}  // namespace rpimc
