#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "afem/mesh.hpp"

using afem::Point2;
using afem::TriMesh;

TEST(Mesh, SmallestGridCounts) {
  const TriMesh m = TriMesh::unit_square(1);
  EXPECT_EQ(m.num_vertices(), 4);
  EXPECT_EQ(m.num_triangles(), 2);
  EXPECT_EQ(m.boundary_edges().size(), 4u);
  EXPECT_EQ(m.num_edges(), 5);
}

TEST(Mesh, CountsFollowConstruction) {
  for (int n : {2, 3, 7, 16}) {
    const TriMesh m = TriMesh::unit_square(n);
    EXPECT_EQ(m.num_vertices(), (n + 1) * (n + 1));
    EXPECT_EQ(m.num_triangles(), 2 * n * n);
    EXPECT_EQ(static_cast<int>(m.boundary_edges().size()), 4 * n);
    // Euler: V - E + F = 1 for a disc.
    EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_triangles(), 1);
  }
}

TEST(Mesh, RejectsEmptyGrid) { EXPECT_THROW(TriMesh::unit_square(0), std::invalid_argument); }

TEST(Mesh, TrianglesAreCounterclockwiseAndTile) {
  const int n = 5;
  const TriMesh m = TriMesh::unit_square(n);
  double area = 0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    EXPECT_GT(m.signed_area(t), 0.0);
    area += m.signed_area(t);
  }
  EXPECT_NEAR(area, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(m.h(), 0.2);
}

TEST(Mesh, VertexNumbering) {
  const TriMesh m = TriMesh::unit_square(4);
  const Point2 v = m.vertices()[2 * 5 + 3];
  EXPECT_DOUBLE_EQ(v.x(), 0.75);
  EXPECT_DOUBLE_EQ(v.y(), 0.5);
}

TEST(Mesh, EdgesAreUniqueAndConsistent) {
  const TriMesh m = TriMesh::unit_square(3);
  std::set<std::pair<int, int>> seen;
  for (const auto& e : m.edges()) {
    EXPECT_TRUE(seen.insert({std::min(e[0], e[1]), std::max(e[0], e[1])}).second);
  }
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto tri = m.triangles()[t];
    for (int k = 0; k < 3; ++k) {
      const auto e = m.edges()[m.triangle_edges()[t][k]];
      const std::set<int> a{e[0], e[1]}, b{tri[k], tri[(k + 1) % 3]};
      EXPECT_EQ(a, b);
    }
  }
}

TEST(Mesh, BoundaryEdgesLieOnTheirSide) {
  const TriMesh m = TriMesh::unit_square(4);
  for (const auto& be : m.boundary_edges()) {
    EXPECT_TRUE(m.is_boundary_edge(be.edge));
    for (int v : be.vertices) {
      const Point2 p = m.vertices()[v];
      switch (be.side) {
        case afem::BoundarySide::bottom: EXPECT_EQ(p.y(), 0.0); break;
        case afem::BoundarySide::right: EXPECT_EQ(p.x(), 1.0); break;
        case afem::BoundarySide::top: EXPECT_EQ(p.y(), 1.0); break;
        case afem::BoundarySide::left: EXPECT_EQ(p.x(), 0.0); break;
      }
    }
  }
  int interior = 0;
  for (int e = 0; e < m.num_edges(); ++e) interior += !m.is_boundary_edge(e);
  EXPECT_EQ(interior, m.num_edges() - 16);
}

TEST(Mesh, BoundaryVertexSet) {
  EXPECT_EQ(afem::boundary_vertex_set(TriMesh::unit_square(1)).size(), 4u);
  const TriMesh m2 = TriMesh::unit_square(2);
  const auto b2 = afem::boundary_vertex_set(m2);
  EXPECT_EQ(b2.size(), 8u);
  EXPECT_FALSE(m2.is_boundary_vertex(4));
  EXPECT_TRUE(std::is_sorted(b2.begin(), b2.end()));
  const TriMesh m4 = TriMesh::unit_square(4);
  EXPECT_EQ(afem::boundary_vertex_set(m4).size(), 16u);
  int interior = 0;
  for (int v = 0; v < m4.num_vertices(); ++v) interior += !m4.is_boundary_vertex(v);
  EXPECT_EQ(interior, 9);
}

TEST(Mesh, LocateFindsContainingTriangle) {
  const TriMesh m = TriMesh::unit_square(8);
  for (const Point2& p : {Point2(0.31, 0.77), Point2(0.0, 0.0), Point2(1.0, 1.0), Point2(0.5, 0.5),
                          Point2(0.999, 0.001)}) {
    const auto t = m.locate(p);
    ASSERT_TRUE(t.has_value());
    const auto tri = m.triangles()[*t];
    const Point2 a = m.vertices()[tri[0]], b = m.vertices()[tri[1]], c = m.vertices()[tri[2]];
    auto cross = [](const Point2& u, const Point2& v) { return u.x() * v.y() - u.y() * v.x(); };
    EXPECT_GE(cross(b - a, p - a), -1e-14);
    EXPECT_GE(cross(c - b, p - b), -1e-14);
    EXPECT_GE(cross(a - c, p - c), -1e-14);
  }
  EXPECT_FALSE(m.locate(Point2(1.2, 0.5)).has_value());
  EXPECT_FALSE(m.locate(Point2(-0.1, 0.5)).has_value());
}
