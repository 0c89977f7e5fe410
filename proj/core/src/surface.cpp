#include "raycut/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "raycut/error.hpp"

namespace raycut {

SegMesh extract_mesh(std::span<const int> boundary, const RayGrid& rays,
                     const SphereTemplate& tmpl) {
  if (boundary.size() != static_cast<std::size_t>(rays.rays) ||
      tmpl.ray_count() != boundary.size()) {
    throw Error(Errc::kInvalidArgument, "boundary, ray grid and template disagree on R");
  }
  SegMesh mesh;
  mesh.seed = rays.seed;
  mesh.vertices.reserve(boundary.size());
  for (int r = 0; r < rays.rays; ++r) {
    const int b = boundary[r];
    if (b < 0 || b >= rays.samples) {
      throw Error(Errc::kInvalidArgument, "boundary index out of range");
    }
    mesh.vertices.push_back(rays.position(r, b));
  }
  mesh.triangles = tmpl.triangles;
  return mesh;
}

namespace {

struct P2 {
  double y;
  double z;
};

// Twice the signed area of (a, b, p) in the y-z plane.
inline double edge_fn(const P2& a, const P2& b, const P2& p) {
  return (b.y - a.y) * (p.z - a.z) - (b.z - a.z) * (p.y - a.y);
}

// Tie rule for points exactly on an edge of a positively oriented triangle:
// an edge owns its points when it runs in +y, or along -z when horizontal.
// Two triangles on opposite sides of a shared edge traverse it in opposite
// directions, so exactly one of them claims the point.
inline bool owns_edge(const P2& a, const P2& b) {
  const double dy = b.y - a.y;
  const double dz = b.z - a.z;
  return dy > 0.0 || (dy == 0.0 && dz < 0.0);
}

void check_degenerate(const SegMesh& mesh) {
  Vec3 lo = mesh.vertices.front();
  Vec3 hi = lo;
  for (const auto& v : mesh.vertices) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], v[a]);
      hi[a] = std::max(hi[a], v[a]);
    }
  }
  const double extent = norm(hi - lo);
  const double tol = 1e-12 * extent * extent;
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    if (0.5 * norm(cross(b - a, c - a)) <= tol) {
      throw Error(Errc::kDegenerateMesh, "mesh has a zero-area triangle");
    }
  }
}

}  // namespace

MaskVolume voxelize(const SegMesh& mesh, const Geometry& geometry, ScanDirection direction) {
  MaskVolume mask(geometry);
  if (mesh.vertices.empty() || mesh.triangles.empty()) {
    throw Error(Errc::kDegenerateMesh, "mesh is empty");
  }
  for (const auto& t : mesh.triangles) {
    for (int v : t) {
      if (v < 0 || static_cast<std::size_t>(v) >= mesh.vertices.size()) {
        throw Error(Errc::kDegenerateMesh, "triangle references a missing vertex");
      }
    }
  }
  check_degenerate(mesh);

  const auto [nx, ny, nz] = geometry.dims;
  const Vec3& o = geometry.origin;
  const Vec3& s = geometry.spacing;
  // Row origins are nudged off the lattice so no row passes exactly through
  // a mesh vertex or edge in general position.
  const double shift_y = 1e-6 * s.y;
  const double shift_z = 1e-6 * s.z * 0.6180339887498949;

  std::vector<std::vector<double>> crossings(ny * nz);
  for (const auto& t : mesh.triangles) {
    const Vec3* v[3] = {&mesh.vertices[t[0]], &mesh.vertices[t[1]], &mesh.vertices[t[2]]};
    P2 p[3] = {{v[0]->y, v[0]->z}, {v[1]->y, v[1]->z}, {v[2]->y, v[2]->z}};
    double area = edge_fn(p[0], p[1], p[2]);
    if (area == 0.0) continue;  // face parallel to the scan direction
    if (area < 0.0) {
      std::swap(p[1], p[2]);
      std::swap(v[1], v[2]);
      area = -area;
    }
    const double ymin = std::min({p[0].y, p[1].y, p[2].y});
    const double ymax = std::max({p[0].y, p[1].y, p[2].y});
    const double zmin = std::min({p[0].z, p[1].z, p[2].z});
    const double zmax = std::max({p[0].z, p[1].z, p[2].z});
    const auto j0 = static_cast<std::int64_t>(std::ceil((ymin - o.y - shift_y) / s.y));
    const auto j1 = static_cast<std::int64_t>(std::floor((ymax - o.y - shift_y) / s.y));
    const auto k0 = static_cast<std::int64_t>(std::ceil((zmin - o.z - shift_z) / s.z));
    const auto k1 = static_cast<std::int64_t>(std::floor((zmax - o.z - shift_z) / s.z));
    const bool own[3] = {owns_edge(p[1], p[2]), owns_edge(p[2], p[0]), owns_edge(p[0], p[1])};

    for (std::int64_t k = std::max<std::int64_t>(k0, 0);
         k <= std::min<std::int64_t>(k1, static_cast<std::int64_t>(nz) - 1); ++k) {
      for (std::int64_t j = std::max<std::int64_t>(j0, 0);
           j <= std::min<std::int64_t>(j1, static_cast<std::int64_t>(ny) - 1); ++j) {
        const P2 q{o.y + static_cast<double>(j) * s.y + shift_y,
                   o.z + static_cast<double>(k) * s.z + shift_z};
        const double e[3] = {edge_fn(p[1], p[2], q), edge_fn(p[2], p[0], q),
                             edge_fn(p[0], p[1], q)};
        bool inside = true;
        for (int m = 0; m < 3 && inside; ++m) {
          inside = e[m] > 0.0 || (e[m] == 0.0 && own[m]);
        }
        if (!inside) continue;
        const double x = (e[0] * v[0]->x + e[1] * v[1]->x + e[2] * v[2]->x) / area;
        crossings[static_cast<std::size_t>(j) + ny * static_cast<std::size_t>(k)].push_back(x);
      }
    }
  }

  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < ny; ++j) {
      auto& xs = crossings[j + ny * k];
      if (xs.empty()) continue;
      std::sort(xs.begin(), xs.end());
      const auto i_lo = static_cast<std::int64_t>(std::floor((xs.front() - o.x) / s.x));
      const auto i_hi = static_cast<std::int64_t>(std::ceil((xs.back() - o.x) / s.x));
      for (std::int64_t i = std::max<std::int64_t>(i_lo, 0);
           i <= std::min<std::int64_t>(i_hi, static_cast<std::int64_t>(nx) - 1); ++i) {
        const double xc = o.x + static_cast<double>(i) * s.x;
        const auto below = std::lower_bound(xs.begin(), xs.end(), xc) - xs.begin();
        // Half-open: +x counts crossings in [xc, inf), -x those in (-inf, xc).
        const auto hits = direction == ScanDirection::kPositiveX
                              ? static_cast<std::ptrdiff_t>(xs.size()) - below
                              : below;
        if (hits % 2 == 1) mask.set(static_cast<std::size_t>(i), j, k, 1);
      }
    }
  }

  const Index3 seed = nearest_voxel(geometry, mesh.seed);
  if (geometry.contains(seed)) {
    mask.set(static_cast<std::size_t>(seed.i), static_cast<std::size_t>(seed.j),
             static_cast<std::size_t>(seed.k), 1);
  }
  return mask;
}

void export_obj(const SegMesh& mesh, const std::filesystem::path& path) {
  if (path.empty()) throw Error(Errc::kIo, "empty OBJ output path");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot open '" + path.string() + "' for writing");
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.12g %.12g %.12g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  out.flush();
  if (!out) throw Error(Errc::kIo, "failed writing '" + path.string() + "'");
}

}  // namespace raycut
