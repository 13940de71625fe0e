#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "analogy/embedding_store.hpp"
#include "analogy/types.hpp"

namespace analogy {

/// Top-two principal axes of a point set.
struct Projection2D {
  Vector mean;
  std::array<Vector, 2> axes;
  std::array<double, 2> explained_variance{0.0, 0.0};
  /// Rank-1 input: the second axis is undefined and left as the zero vector,
  /// so every projected y coordinate is 0.
  bool degenerate = false;

  /// ((v - mean) . axis0, (v - mean) . axis1)
  std::array<double, 2> project(std::span<const double> v) const;
  /// (v . axis0, v . axis1), for directions rather than points.
  std::array<double, 2> project_direction(std::span<const double> v) const;
};

/// PCA of at least three vectors. Uses the n x n Gram matrix of the centred
/// data when n < d and the d x d covariance otherwise. Each axis is signed so
/// its largest-magnitude component is positive (first such component on ties).
/// Throws Error(DegenerateData) when all vectors coincide.
Projection2D fit_pca(const std::vector<Vector>& vectors);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Arrow {
  Point2 tail;
  Point2 head;
  std::string label;
  bool zero_length = false;
};

struct Viewport {
  double min_x = -1.0;
  double max_x = 1.0;
  double min_y = -1.0;
  double max_y = 1.0;

  bool contains(const Point2& p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
};

struct ArrowPlot {
  std::string title;
  std::vector<Arrow> arrows;
  Viewport viewport;
  bool degenerate = false;
};

enum class ProjectionMode {
  /// Project both words; the arrow runs from A to B.
  Endpoints,
  /// Project the difference vector itself; the arrow runs from the origin.
  Differences,
};

/// Bounding box of all arrow endpoints with a 5% margin on every side.
Viewport fit_viewport(const std::vector<Arrow>& arrows);

/// One arrow per pair. Throws MissingToken.
ArrowPlot project_pairs(const Projection2D& projection, const std::vector<WordPair>& pairs,
                        const EmbeddingSpace& space, ProjectionMode mode = ProjectionMode::Endpoints,
                        std::string title = {});

/// Fits PCA for one subtype (on the A and B words, or on the difference
/// vectors in Differences mode) and projects its pairs.
ArrowPlot plot_relation(const EmbeddingSpace& space, const std::vector<WordPair>& pairs,
                        std::string title, ProjectionMode mode = ProjectionMode::Endpoints);

/// Standalone SVG 1.1 document laying the plots out on a grid, one titled
/// panel per plot. Output bytes depend only on the input.
std::string render_svg(const std::vector<ArrowPlot>& plots, std::size_t grid_columns);

/// panel,tail_x,tail_y,head_x,head_y,label
void write_plot_csv(std::ostream& out, const std::vector<ArrowPlot>& plots);

}  // namespace analogy
