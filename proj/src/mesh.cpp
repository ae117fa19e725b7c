#include "tracefem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <Eigen/Dense>

#include "tracefem/error.hpp"

namespace tracefem {

namespace {

// Cube corner c has offset (c & 1, (c >> 1) & 1, (c >> 2) & 1).
constexpr int kPermutations[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                     {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

BackgroundMesh build_from_cells(const Cube& box, int n, const std::vector<char>& keep) {
  if (n < 2) throw PreconditionError("background mesh: n_cells must be >= 2");
  if (!(box.upper > box.lower)) throw PreconditionError("background mesh: degenerate box");

  BackgroundMesh mesh;
  mesh.box = box;
  mesh.n_cells = n;
  mesh.h = box.edge() / n;

  const int nv = n + 1;
  auto grid = [nv](int i, int j, int k) { return (static_cast<long>(k) * nv + j) * nv + i; };
  std::vector<int> vertex_id(static_cast<std::size_t>(nv) * nv * nv, -1);

  auto cell_index = [n](int i, int j, int k) { return (static_cast<long>(k) * n + j) * n + i; };
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (!keep[cell_index(i, j, k)]) continue;
        for (int c = 0; c < 8; ++c)
          vertex_id[grid(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))] = 0;
      }
  for (int k = 0; k < nv; ++k)
    for (int j = 0; j < nv; ++j)
      for (int i = 0; i < nv; ++i) {
        auto& id = vertex_id[grid(i, j, k)];
        if (id < 0) continue;
        id = static_cast<int>(mesh.vertices.size());
        mesh.vertices.emplace_back(box.lower + i * mesh.h, box.lower + j * mesh.h,
                                   box.lower + k * mesh.h);
      }

  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (!keep[cell_index(i, j, k)]) continue;
        for (const auto& perm : kPermutations) {
          int offset[3] = {0, 0, 0};
          std::array<int, 4> tet;
          tet[0] = vertex_id[grid(i, j, k)];
          for (int s = 0; s < 3; ++s) {
            ++offset[perm[s]];
            tet[s + 1] = vertex_id[grid(i + offset[0], j + offset[1], k + offset[2])];
          }
          const Vec3& a = mesh.vertices[tet[0]];
          const double det = (mesh.vertices[tet[1]] - a)
                                 .cross(mesh.vertices[tet[2]] - a)
                                 .dot(mesh.vertices[tet[3]] - a);
          if (det < 0.0) std::swap(tet[2], tet[3]);
          mesh.tets.push_back(tet);
        }
      }

  // Faces: sort (sorted vertex triple, tet, local) records and pair them up.
  struct Record {
    std::array<int, 3> key;
    int tet;
    int local;
  };
  std::vector<Record> records;
  records.reserve(mesh.tets.size() * 4);
  for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t)
    for (int l = 0; l < 4; ++l) {
      std::array<int, 3> key;
      int m = 0;
      for (int v = 0; v < 4; ++v)
        if (v != l) key[m++] = mesh.tets[t][v];
      std::sort(key.begin(), key.end());
      records.push_back({key, t, l});
    }
  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    return a.key != b.key ? a.key < b.key : a.tet < b.tet;
  });

  mesh.tet_faces.assign(mesh.tets.size(), {-1, -1, -1, -1});
  for (std::size_t r = 0; r < records.size();) {
    const bool paired = r + 1 < records.size() && records[r + 1].key == records[r].key;
    Face face;
    face.vertices = records[r].key;
    face.plus = records[r].tet;
    face.minus = paired ? records[r + 1].tet : -1;
    const Vec3& a = mesh.vertices[face.vertices[0]];
    Vec3 nrm = (mesh.vertices[face.vertices[1]] - a).cross(mesh.vertices[face.vertices[2]] - a);
    nrm.normalize();
    const Vec3& opposite = mesh.vertices[mesh.tets[face.plus][records[r].local]];
    if (nrm.dot(opposite - a) > 0.0) nrm = -nrm;
    face.normal = nrm;
    const int id = static_cast<int>(mesh.faces.size());
    mesh.faces.push_back(face);
    mesh.tet_faces[records[r].tet][records[r].local] = id;
    if (paired) mesh.tet_faces[records[r + 1].tet][records[r + 1].local] = id;
    r += paired ? 2 : 1;
  }
  return mesh;
}

}  // namespace

std::array<Vec3, 4> BackgroundMesh::tet_vertices(int t) const {
  const auto& tet = tets[t];
  return {vertices[tet[0]], vertices[tet[1]], vertices[tet[2]], vertices[tet[3]]};
}

double BackgroundMesh::tet_volume(int t) const {
  const auto v = tet_vertices(t);
  return (v[1] - v[0]).cross(v[2] - v[0]).dot(v[3] - v[0]) / 6.0;
}

BackgroundMesh build_background_mesh(const Cube& box, int n_cells) {
  if (n_cells < 2) throw PreconditionError("background mesh: n_cells must be >= 2");
  return build_from_cells(box, n_cells,
                          std::vector<char>(static_cast<std::size_t>(n_cells) * n_cells * n_cells, 1));
}

BackgroundMesh build_band_mesh(const Cube& box, int n, const LevelSet& phi, double guard) {
  if (n < 2) throw PreconditionError("background mesh: n_cells must be >= 2");
  if (!(box.upper > box.lower)) throw PreconditionError("background mesh: degenerate box");
  const double h = box.edge() / n;
  const int nv = n + 1;
  std::vector<char> negative(static_cast<std::size_t>(nv) * nv * nv);
  for (int k = 0; k < nv; ++k)
    for (int j = 0; j < nv; ++j)
      for (int i = 0; i < nv; ++i) {
        const Vec3 x(box.lower + i * h, box.lower + j * h, box.lower + k * h);
        negative[(static_cast<long>(k) * nv + j) * nv + i] = guarded(phi(x), h, guard) < 0.0;
      }
  std::vector<char> keep(static_cast<std::size_t>(n) * n * n, 0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        int count = 0;
        for (int c = 0; c < 8; ++c)
          count += negative[(static_cast<long>(k + ((c >> 2) & 1)) * nv + j + ((c >> 1) & 1)) * nv +
                            i + (c & 1)];
        keep[(static_cast<long>(k) * n + j) * n + i] = count > 0 && count < 8;
      }
  return build_from_cells(box, n, keep);
}

double guarded(double value, double h, double guard) {
  const double floor = guard * h;
  if (std::abs(value) < floor) return value < 0.0 ? -floor : floor;
  return value;
}

std::vector<double> interpolate_levelset(const LevelSet& phi, const BackgroundMesh& mesh,
                                         double guard) {
  if (guard < 0.0) throw PreconditionError("interpolate_levelset: negative guard");
  std::vector<double> values(mesh.vertices.size());
  for (std::size_t v = 0; v < values.size(); ++v)
    values[v] = guarded(phi(mesh.vertices[v]), mesh.h, guard);
  return values;
}

Vec3 edge_root(const Vec3& a, const Vec3& b, double phi_a, double phi_b) {
  if (phi_a > 0.0) return edge_root(b, a, phi_b, phi_a);
  return a + (phi_a / (phi_a - phi_b)) * (b - a);
}

Vec3 CutPolygon::centroid() const {
  Vec3 c = Vec3::Zero();
  for (int k = 0; k < count; ++k) c += points[k];
  return c / count;
}

std::optional<CutPolygon> cut_tet(const std::array<Vec3, 4>& v, const std::array<double, 4>& phi) {
  std::array<int, 4> neg{}, pos{};
  int nn = 0, np = 0;
  for (int k = 0; k < 4; ++k) {
    if (phi[k] == 0.0) throw PreconditionError("cut_tet: level set value is exactly zero");
    if (phi[k] < 0.0)
      neg[nn++] = k;
    else
      pos[np++] = k;
  }
  if (nn == 0 || np == 0) return std::nullopt;

  CutPolygon poly;
  auto root = [&](int a, int b) { return edge_root(v[a], v[b], phi[a], phi[b]); };
  if (nn == 1 || np == 1) {
    const int lone = nn == 1 ? neg[0] : pos[0];
    int m = 0;
    for (int k = 0; k < 4; ++k)
      if (k != lone) poly.points[m++] = root(lone, k);
    poly.count = 3;
    poly.area = 0.5 * (poly.points[1] - poly.points[0]).cross(poly.points[2] - poly.points[0]).norm();
  } else {
    // {a, b} is the pair containing vertex 0, {c, d} the other pair.
    const auto& first = (neg[0] == 0) ? neg : pos;
    const auto& second = (neg[0] == 0) ? pos : neg;
    const int a = first[0], b = first[1], c = second[0], d = second[1];
    poly.points = {root(a, c), root(b, c), root(b, d), root(a, d)};
    poly.count = 4;
    poly.area = 0.5 * (poly.points[2] - poly.points[0]).cross(poly.points[3] - poly.points[1]).norm();
  }

  Mat3 edges;
  Vec3 rhs;
  for (int k = 0; k < 3; ++k) {
    edges.row(k) = (v[k + 1] - v[0]).transpose();
    rhs[k] = phi[k + 1] - phi[0];
  }
  const Vec3 grad = edges.partialPivLu().solve(rhs);
  poly.normal = grad.normalized();
  return poly;
}

double CutComplex::surface_area() const {
  double a = 0.0;
  for (const auto& p : polygons) a += p.area;
  return a;
}

CutComplex extract_cut_complex(std::shared_ptr<const BackgroundMesh> mesh,
                               std::vector<double> levelset) {
  if (levelset.size() != mesh->vertices.size())
    throw PreconditionError("extract_cut_complex: level set size mismatch");
  CutComplex cx;
  cx.background = mesh;
  cx.levelset = std::move(levelset);
  const auto& phi = cx.levelset;

  cx.active_index.assign(mesh->tets.size(), -1);
  for (int t = 0; t < static_cast<int>(mesh->tets.size()); ++t) {
    const auto& tet = mesh->tets[t];
    auto poly = cut_tet(mesh->tet_vertices(t), {phi[tet[0]], phi[tet[1]], phi[tet[2]], phi[tet[3]]});
    if (!poly) continue;
    poly->parent_tet = t;
    cx.active_index[t] = static_cast<int>(cx.active_tets.size());
    cx.active_tets.push_back(t);
    cx.polygons.push_back(*poly);
  }

  for (int f = 0; f < static_cast<int>(mesh->faces.size()); ++f) {
    const Face& face = mesh->faces[f];
    const auto& fv = face.vertices;
    int negatives = 0;
    for (int v : fv) negatives += phi[v] < 0.0;
    const bool crossed = negatives == 1 || negatives == 2;

    if (crossed && !face.interior())
      throw GeometryError("surface leaves background domain");

    const int plus = cx.active_index[face.plus];
    const int minus = face.interior() ? cx.active_index[face.minus] : -1;
    if (plus >= 0 && minus >= 0) {
      Facet facet;
      facet.face = f;
      facet.plus = plus;
      facet.minus = minus;
      facet.normal = face.normal;
      for (int k = 0; k < 3; ++k) facet.vertices[k] = mesh->vertices[fv[k]];
      facet.area = 0.5 * (facet.vertices[1] - facet.vertices[0])
                             .cross(facet.vertices[2] - facet.vertices[0])
                             .norm();
      cx.facets.push_back(facet);
    }
    if (!crossed) continue;
    if (plus < 0 || minus < 0) throw GeometryError("surface edge without two cut polygons");

    // The vertex whose sign differs from the other two.
    int lone = 0;
    for (int k = 0; k < 3; ++k) {
      const bool neg = phi[fv[k]] < 0.0;
      if ((negatives == 1 && neg) || (negatives == 2 && !neg)) lone = k;
    }
    SurfaceEdge e;
    e.face = f;
    e.plus = plus;
    e.minus = minus;
    int m = 0;
    for (int k = 0; k < 3; ++k)
      if (k != lone)
        e.endpoints[m++] = edge_root(mesh->vertices[fv[lone]], mesh->vertices[fv[k]],
                                     phi[fv[lone]], phi[fv[k]]);
    const Vec3 d = e.endpoints[1] - e.endpoints[0];
    e.length = d.norm();
    e.tangent = d / e.length;
    const Vec3 mid = 0.5 * (e.endpoints[0] + e.endpoints[1]);
    auto conormal = [&](const CutPolygon& k) {
      Vec3 mu = k.normal.cross(e.tangent).normalized();
      if (mu.dot(k.centroid() - mid) > 0.0) mu = -mu;
      return mu;
    };
    e.mu_plus = conormal(cx.polygons[plus]);
    e.mu_minus = conormal(cx.polygons[minus]);
    e.mu = (e.mu_plus - e.mu_minus) / (1.0 - e.mu_plus.dot(e.mu_minus));
    cx.edges.push_back(e);
  }
  return cx;
}

void write_surface(std::ostream& os, const CutComplex& complex) {
  const auto old = os.precision(17);
  for (const auto& p : complex.polygons) {
    os << "K " << p.parent_tet << ' ' << p.count;
    for (const auto& x : p.vertices()) os << ' ' << x[0] << ' ' << x[1] << ' ' << x[2];
    os << '\n';
  }
  os.precision(old);
}

}  // namespace tracefem
