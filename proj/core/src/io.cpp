#include "rpimc/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rpimc {

void write_cloud(const NodeCloud& cloud, std::ostream& out) {
  out << cloud.dim << ' ' << cloud.size() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    const Vec3& n = cloud.normals[i];
    out << p.x << ' ' << p.y;
    if (cloud.dim == 3) out << ' ' << p.z;
    out << ' ' << int(cloud.tags[i]) << ' ' << n.x << ' ' << n.y;
    if (cloud.dim == 3) out << ' ' << n.z;
    out << '\n';
  }
}

NodeCloud read_cloud(std::istream& in) {
  NodeCloud cloud;
  std::size_t count = 0;
  if (!(in >> cloud.dim >> count)) throw std::runtime_error("bad point-cloud header");
  if (cloud.dim != 2 && cloud.dim != 3) throw std::runtime_error("dimension must be 2 or 3");
  cloud.positions.resize(count);
  cloud.tags.resize(count);
  cloud.normals.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vec3 p, n;
    int tag = 0;
    if (!(in >> p.x >> p.y)) throw std::runtime_error("bad point-cloud line");
    if (cloud.dim == 3 && !(in >> p.z)) throw std::runtime_error("bad point-cloud line");
    if (!(in >> tag >> n.x >> n.y)) throw std::runtime_error("bad point-cloud line");
    if (cloud.dim == 3 && !(in >> n.z)) throw std::runtime_error("bad point-cloud line");
    if (tag < 0 || tag > 2) throw std::runtime_error("bad boundary tag");
    cloud.positions[i] = p;
    cloud.tags[i] = static_cast<BoundaryTag>(tag);
    cloud.normals[i] = n;
  }
  // bounding box and characteristic spacing from the data
  cloud.bounds.dim = cloud.dim;
  cloud.bounds.lo = cloud.positions.empty() ? Vec3{} : cloud.positions.front();
  cloud.bounds.hi = cloud.bounds.lo;
  for (const Vec3& p : cloud.positions) {
    for (int k = 0; k < cloud.dim; ++k) {
      cloud.bounds.lo[k] = std::min(cloud.bounds.lo[k], p[k]);
      cloud.bounds.hi[k] = std::max(cloud.bounds.hi[k], p[k]);
    }
  }
  if (count >= 2) cloud.spacing = mean_nearest_distance(cloud);
  return cloud;
}

NodeCloud read_cloud_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open point-cloud file: " + path);
  return read_cloud(in);
}

void write_cloud_file(const NodeCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write point-cloud file: " + path);
  write_cloud(cloud, out);
}

void write_vtk_points(const NodeCloud& cloud, const std::vector<double>& scalars,
                      const std::string& array_name, std::ostream& out) {
  if (scalars.size() != cloud.size()) throw std::invalid_argument("scalar size mismatch");
  out << "# vtk DataFile Version 3.0\n";
  out << "point data\n";
  out << "ASCII\n";
  out << "DATASET POLYDATA\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "POINTS " << cloud.size() << " double\n";
  for (const Vec3& p : cloud.positions) out << p.x << ' ' << p.y << ' ' << p.z << '\n';
  out << "VERTICES " << cloud.size() << ' ' << 2 * cloud.size() << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) out << "1 " << i << '\n';
  out << "POINT_DATA " << cloud.size() << '\n';
  out << "SCALARS " << array_name << " double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (double v : scalars) out << v << '\n';
}

void write_lat_csv(const NodeCloud& cloud, const ActivationMap& lat, std::ostream& out) {
  out << "node_id,x,y,z,lat_ms\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    out << i << ',' << p.x << ',' << p.y << ',' << p.z << ',' << lat.lat_ms[i] << '\n';
  }
}

}  // namespace rpimc
