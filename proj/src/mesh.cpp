#include "afem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace afem {

TriMesh TriMesh::unit_square(int n) {
  if (n < 1) {
    throw std::invalid_argument("unit square mesh needs n >= 1, got " + std::to_string(n));
  }
  TriMesh m;
  m.n_ = n;
  const int side = n + 1;
  m.vertices_.reserve(static_cast<std::size_t>(side) * side);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      m.vertices_.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  auto vid = [side](int i, int j) { return j * side + i; };

  m.triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      m.triangles_.push_back({v00, v10, v11});
      m.triangles_.push_back({v00, v11, v01});
    }
  }

  std::map<std::pair<int, int>, int> edge_ids;
  m.triangle_edges_.resize(m.triangles_.size());
  for (std::size_t t = 0; t < m.triangles_.size(); ++t) {
    const auto& tri = m.triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_ids.try_emplace({key.first, key.second}, m.num_edges());
      if (inserted) m.edges_.push_back({key.first, key.second});
      m.triangle_edges_[t][k] = it->second;
    }
  }

  m.edge_on_boundary_.assign(m.edges_.size(), false);
  auto add_boundary = [&](int a, int b, BoundarySide s) {
    const auto key = std::minmax(a, b);
    const int e = edge_ids.at({key.first, key.second});
    m.edge_on_boundary_[e] = true;
    m.boundary_edges_.push_back({{a, b}, s, e});
  };
  for (int i = 0; i < n; ++i) {
    add_boundary(vid(i, 0), vid(i + 1, 0), BoundarySide::bottom);
    add_boundary(vid(n, i), vid(n, i + 1), BoundarySide::right);
    add_boundary(vid(n - i, n), vid(n - i - 1, n), BoundarySide::top);
    add_boundary(vid(0, n - i), vid(0, n - i - 1), BoundarySide::left);
  }
  return m;
}

bool TriMesh::is_boundary_vertex(int v) const {
  const int side = n_ + 1;
  const int i = v % side, j = v / side;
  return i == 0 || j == 0 || i == n_ || j == n_;
}

double TriMesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Point2 a = vertices_[tri[1]] - vertices_[tri[0]];
  const Point2 b = vertices_[tri[2]] - vertices_[tri[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

std::optional<int> TriMesh::locate(const Point2& p) const {
  constexpr double slack = 1e-12;
  if (!(p.x() >= -slack && p.x() <= 1 + slack && p.y() >= -slack && p.y() <= 1 + slack)) {
    return std::nullopt;
  }
  const int i = std::clamp(static_cast<int>(std::floor(p.x() * n_)), 0, n_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(p.y() * n_)), 0, n_ - 1);
  // Cell (i, j) holds triangles 2c (below the diagonal) and 2c+1 (above).
  const int cell = j * n_ + i;
  const double lx = p.x() * n_ - i, ly = p.y() * n_ - j;
  const int t = ly <= lx ? 2 * cell : 2 * cell + 1;

  // Barycentric sign test as a guard against rounding at cell borders.
  auto inside = [&](int tri) {
    const auto& v = triangles_[tri];
    const Point2& a = vertices_[v[0]];
    const Point2& b = vertices_[v[1]];
    const Point2& c = vertices_[v[2]];
    auto cross = [](const Point2& o, const Point2& u, const Point2& w) {
      return (u.x() - o.x()) * (w.y() - o.y()) - (u.y() - o.y()) * (w.x() - o.x());
    };
    const double tol = -1e-12 * h() * h();
    return cross(a, b, p) >= tol && cross(b, c, p) >= tol && cross(c, a, p) >= tol;
  };
  if (inside(t)) return t;
  const int other = (t % 2 == 0) ? t + 1 : t - 1;
  if (inside(other)) return other;
  return t;
}

std::vector<int> boundary_vertex_set(const TriMesh& mesh) {
  std::vector<int> out;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary_vertex(v)) out.push_back(v);
  }
  return out;
}

}  // namespace afem
