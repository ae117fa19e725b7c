#pragma once

/// \file mesh.hpp
/// Structured background tetrahedral meshes and the cut complex induced by a
/// piecewise linear level set: active tets, planar cut polygons, surface
/// edges with co-normals and the interior facets of the active mesh.

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tracefem/geometry.hpp"

namespace tracefem {

/// The cube [lower, upper]^3.
struct Cube {
  double lower = -1.2;
  double upper = 1.2;
  double edge() const { return upper - lower; }
};

/// Triangular face of the background mesh. `normal` is the outward normal of
/// the `plus` tet; `minus` is -1 on the boundary of the mesh.
struct Face {
  std::array<int, 3> vertices;
  int plus = -1;
  int minus = -1;
  Vec3 normal;
  bool interior() const { return minus >= 0; }
};

struct BackgroundMesh {
  Cube box;
  int n_cells = 0;
  double h = 0.0;  // cube-cell edge length
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;  // positively oriented
  std::vector<Face> faces;
  std::vector<std::array<int, 4>> tet_faces;  // face opposite local vertex k

  std::array<Vec3, 4> tet_vertices(int t) const;
  double tet_volume(int t) const;
};

using LevelSet = std::function<double(const Vec3&)>;

/// Kuhn (Freudenthal) split of every cube cell into six tets.
BackgroundMesh build_background_mesh(const Cube& box, int n_cells);

/// Same split, restricted to the cells on which the guarded interpolant of
/// `phi` changes sign. Contains every tet the full mesh would make active.
BackgroundMesh build_band_mesh(const Cube& box, int n_cells, const LevelSet& phi,
                               double guard = 1e-10);

/// Values with |v| < guard h are pushed to sign(v) guard h (sign(0) = +1).
double guarded(double value, double h, double guard);

/// Nodal values of phi, guarded.
std::vector<double> interpolate_levelset(const LevelSet& phi, const BackgroundMesh& mesh,
                                         double guard = 1e-10);

/// Planar cut of one tet: a triangle or an ordered quadrilateral.
struct CutPolygon {
  int parent_tet = -1;
  std::array<Vec3, 4> points;
  int count = 0;
  Vec3 normal;  // along grad phi_h
  double area = 0.0;

  std::span<const Vec3> vertices() const { return {points.data(), static_cast<std::size_t>(count)}; }
  Vec3 centroid() const;
  Mat3 projector() const { return Mat3::Identity() - normal * normal.transpose(); }
};

/// Zero set of the linear interpolant of `phi` on the tet, if nonempty.
/// Throws PreconditionError if any value is exactly zero.
std::optional<CutPolygon> cut_tet(const std::array<Vec3, 4>& vertices,
                                  const std::array<double, 4>& phi);

/// Point where the linear interpolant vanishes on segment [a, b]. The result
/// does not depend on the order of the two arguments.
Vec3 edge_root(const Vec3& a, const Vec3& b, double phi_a, double phi_b);

/// Edge E = dK+ ∩ dK- of the surface mesh. `plus`/`minus` are active-tet
/// indices (equal to polygon indices) of the face's plus and minus tets.
struct SurfaceEdge {
  std::array<Vec3, 2> endpoints;
  int face = -1;
  int plus = -1;
  int minus = -1;
  Vec3 tangent;
  Vec3 mu_plus;   // outward co-normal of K+
  Vec3 mu_minus;  // outward co-normal of K-
  Vec3 mu;        // (mu+ - mu-) / (1 - mu+ . mu-)
  double length = 0.0;
};

/// Interior face of the active mesh; plus/minus are active-tet indices.
struct Facet {
  int face = -1;
  int plus = -1;
  int minus = -1;
  Vec3 normal;  // from plus to minus
  std::array<Vec3, 3> vertices;
  double area = 0.0;
};

struct CutComplex {
  std::shared_ptr<const BackgroundMesh> background;
  std::vector<double> levelset;  // guarded nodal values
  std::vector<int> active_tets;  // background tet ids, ascending
  std::vector<int> active_index;  // background tet -> active index or -1
  std::vector<CutPolygon> polygons;  // one per active tet
  std::vector<SurfaceEdge> edges;
  std::vector<Facet> facets;

  double h() const { return background->h; }
  double surface_area() const;
};

/// Builds the cut complex. Throws GeometryError if the discrete surface
/// crosses the boundary of the background mesh.
CutComplex extract_cut_complex(std::shared_ptr<const BackgroundMesh> mesh,
                               std::vector<double> levelset);

/// Writes one `K <tet_id> <n_vertices> x y z ...` record per polygon.
void write_surface(std::ostream& os, const CutComplex& complex);

}  // namespace tracefem
