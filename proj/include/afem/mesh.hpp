#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace afem {

using Point2 = Eigen::Vector2d;

enum class BoundarySide : std::uint8_t { bottom = 0, right = 1, top = 2, left = 3 };

struct BoundaryEdge {
  std::array<int, 2> vertices;
  BoundarySide side;
  int edge;  // index into TriMesh::edges()
};

/// Conforming triangulation of the unit square.
///
/// Built from an n x n grid of squares, each split along the diagonal from its
/// lower-left to its upper-right corner. Vertex (i, j) sits at (i/n, j/n) and
/// has index j*(n+1) + i. Triangles are counterclockwise. Local edge k of a
/// triangle joins its local vertices k and (k+1) % 3.
class TriMesh {
 public:
  static TriMesh unit_square(int n);

  int cells_per_side() const { return n_; }
  double h() const { return 1.0 / n_; }

  std::span<const Point2> vertices() const { return vertices_; }
  std::span<const std::array<int, 3>> triangles() const { return triangles_; }
  std::span<const std::array<int, 2>> edges() const { return edges_; }
  std::span<const std::array<int, 3>> triangle_edges() const { return triangle_edges_; }
  std::span<const BoundaryEdge> boundary_edges() const { return boundary_edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  bool is_boundary_vertex(int v) const;
  bool is_boundary_edge(int e) const { return edge_on_boundary_[e]; }

  double signed_area(int t) const;

  /// Index of a triangle containing p (closed), or nullopt outside [0,1]^2.
  std::optional<int> locate(const Point2& p) const;

 private:
  int n_ = 0;
  std::vector<Point2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<bool> edge_on_boundary_;
};

using MeshPtr = std::shared_ptr<const TriMesh>;

inline TriMesh build_unit_square_mesh(int n) { return TriMesh::unit_square(n); }

/// Sorted indices of vertices with x or y in {0, 1}.
std::vector<int> boundary_vertex_set(const TriMesh& mesh);

}  // namespace afem
