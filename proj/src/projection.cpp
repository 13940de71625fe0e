#include "analogy/projection.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "analogy/csv.hpp"
#include "analogy/error.hpp"
#include "analogy/relsim.hpp"
#include "analogy/vector_core.hpp"

namespace analogy {

namespace {

void orient(Vector& axis) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (std::fabs(axis[i]) > std::fabs(axis[best])) {
      best = i;
    }
  }
  if (axis[best] < 0.0) {
    for (double& x : axis) x = -x;
  }
}

Vector unit(const Eigen::VectorXd& v) {
  const double n = v.norm();
  Vector out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[static_cast<std::size_t>(i)] = v[i] / n;
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::array<double, 2> Projection2D::project(std::span<const double> v) const {
  const Vector centred = difference(v, mean);
  return {dot(centred, axes[0]), dot(centred, axes[1])};
}

std::array<double, 2> Projection2D::project_direction(std::span<const double> v) const {
  return {dot(v, axes[0]), dot(v, axes[1])};
}

Projection2D fit_pca(const std::vector<Vector>& vectors) {
  if (vectors.size() < 3) {
    throw Error(ErrorKind::DegenerateData, "PCA needs at least three vectors");
  }
  const std::size_t n = vectors.size();
  const std::size_t d = vectors.front().size();
  if (d == 0) {
    throw Error(ErrorKind::DegenerateData, "vectors have no components");
  }
  Eigen::MatrixXd x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != d) {
      throw Error(ErrorKind::DimensionMismatch, "PCA inputs differ in dimension");
    }
    for (std::size_t j = 0; j < d; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vectors[i][j];
    }
  }
  const double raw_scale = x.squaredNorm();
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  Projection2D p;
  p.mean.assign(mean.data(), mean.data() + d);

  Eigen::VectorXd eigenvalues;
  std::array<Eigen::VectorXd, 2> directions;
  if (n < d) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x * x.transpose());
    eigenvalues = solver.eigenvalues();
    const Eigen::Index last = eigenvalues.size() - 1;
    for (int k = 0; k < 2; ++k) {
      directions[k] = x.transpose() * solver.eigenvectors().col(last - k);
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x.transpose() * x);
    eigenvalues = solver.eigenvalues();
    const Eigen::Index last = eigenvalues.size() - 1;
    for (int k = 0; k < 2 && last - k >= 0; ++k) {
      directions[k] = solver.eigenvectors().col(last - k);
    }
  }
  const Eigen::Index last = eigenvalues.size() - 1;
  const double lambda1 = std::max(0.0, eigenvalues[last]);
  const double lambda2 = last >= 1 ? std::max(0.0, eigenvalues[last - 1]) : 0.0;
  if (lambda1 <= 1e-24 * (raw_scale + 1e-300)) {
    throw Error(ErrorKind::DegenerateData, "all vectors coincide");
  }
  p.axes[0] = unit(directions[0]);
  orient(p.axes[0]);
  p.explained_variance[0] = lambda1 / static_cast<double>(n - 1);
  if (lambda2 <= 1e-12 * lambda1 || directions[1].size() == 0 || directions[1].norm() == 0.0) {
    p.degenerate = true;
    p.axes[1] = Vector(d, 0.0);
    p.explained_variance[1] = 0.0;
  } else {
    p.axes[1] = unit(directions[1]);
    orient(p.axes[1]);
    p.explained_variance[1] = lambda2 / static_cast<double>(n - 1);
  }
  return p;
}

Viewport fit_viewport(const std::vector<Arrow>& arrows) {
  if (arrows.empty()) {
    return Viewport{};
  }
  Viewport v{arrows[0].tail.x, arrows[0].tail.x, arrows[0].tail.y, arrows[0].tail.y};
  for (const auto& a : arrows) {
    for (const Point2& p : {a.tail, a.head}) {
      v.min_x = std::min(v.min_x, p.x);
      v.max_x = std::max(v.max_x, p.x);
      v.min_y = std::min(v.min_y, p.y);
      v.max_y = std::max(v.max_y, p.y);
    }
  }
  auto pad = [](double& lo, double& hi) {
    const double span = hi - lo;
    const double margin = span > 0.0 ? 0.05 * span : 0.5;
    lo -= margin;
    hi += margin;
  };
  pad(v.min_x, v.max_x);
  pad(v.min_y, v.max_y);
  return v;
}

ArrowPlot project_pairs(const Projection2D& projection, const std::vector<WordPair>& pairs,
                        const EmbeddingSpace& space, ProjectionMode mode, std::string title) {
  ArrowPlot plot;
  plot.title = std::move(title);
  plot.degenerate = projection.degenerate;
  for (const auto& pair : pairs) {
    const Vector a = space.lookup(pair.first);
    const Vector b = space.lookup(pair.second);
    Arrow arrow;
    arrow.label = pair.label();
    if (mode == ProjectionMode::Endpoints) {
      const auto t = projection.project(a);
      const auto h = projection.project(b);
      arrow.tail = {t[0], t[1]};
      arrow.head = {h[0], h[1]};
    } else {
      const auto h = projection.project_direction(difference(b, a));
      arrow.head = {h[0], h[1]};
    }
    arrow.zero_length = arrow.tail.x == arrow.head.x && arrow.tail.y == arrow.head.y;
    plot.arrows.push_back(std::move(arrow));
  }
  plot.viewport = fit_viewport(plot.arrows);
  return plot;
}

ArrowPlot plot_relation(const EmbeddingSpace& space, const std::vector<WordPair>& pairs,
                        std::string title, ProjectionMode mode) {
  std::vector<Vector> points;
  for (const auto& pair : pairs) {
    if (mode == ProjectionMode::Endpoints) {
      points.push_back(space.lookup(pair.first));
      points.push_back(space.lookup(pair.second));
    } else {
      points.push_back(relation_vector(space, pair));
    }
  }
  const Projection2D projection = fit_pca(points);
  return project_pairs(projection, pairs, space, mode, std::move(title));
}

std::string render_svg(const std::vector<ArrowPlot>& plots, std::size_t grid_columns) {
  constexpr double kPanel = 320.0;
  constexpr double kTitle = 24.0;
  constexpr double kPad = 12.0;
  const std::size_t count = std::max<std::size_t>(plots.size(), 1);
  const std::size_t cols = std::clamp<std::size_t>(grid_columns, 1, count);
  const std::size_t rows = (count + cols - 1) / cols;
  const double width = kPanel * static_cast<double>(cols);
  const double height = (kPanel + kTitle) * static_cast<double>(rows);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height)
      << "\">\n"
      << "<defs><marker id=\"arrowhead\" markerWidth=\"8\" markerHeight=\"6\" refX=\"8\" "
         "refY=\"3\" orient=\"auto\"><path d=\"M0,0 L8,3 L0,6 z\" fill=\"#1f4e79\"/></marker></defs>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" fill=\"white\"/>\n";

  for (std::size_t i = 0; i < plots.size(); ++i) {
    const auto& plot = plots[i];
    const double ox = kPanel * static_cast<double>(i % cols);
    const double oy = (kPanel + kTitle) * static_cast<double>(i / cols);
    const double inner = kPanel - 2.0 * kPad;
    const auto& vp = plot.viewport;
    const double dx = vp.max_x - vp.min_x;
    const double dy = vp.max_y - vp.min_y;
    // Equal scale on both axes so arrow directions are not distorted.
    const double scale = inner / std::max(dx, dy);
    const double cx = (vp.min_x + vp.max_x) / 2.0;
    const double cy = (vp.min_y + vp.max_y) / 2.0;
    auto sx = [&](double x) { return kPad + inner / 2.0 + (x - cx) * scale; };
    auto sy = [&](double y) { return kTitle + kPad + inner / 2.0 - (y - cy) * scale; };

    svg << "<g class=\"panel\" id=\"panel-" << i << "\" transform=\"translate(" << num(ox) << ","
        << num(oy) << ")\">\n"
        << "<text class=\"title\" x=\"" << num(kPanel / 2.0) << "\" y=\"16.00\" "
        << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(plot.title) << "</text>\n"
        << "<rect class=\"frame\" x=\"" << num(kPad) << "\" y=\"" << num(kTitle + kPad)
        << "\" width=\"" << num(inner) << "\" height=\"" << num(inner)
        << "\" fill=\"none\" stroke=\"#999999\"/>\n";
    if (vp.min_x <= 0.0 && vp.max_x >= 0.0) {
      svg << "<line class=\"axis\" x1=\"" << num(sx(0.0)) << "\" y1=\"" << num(kTitle + kPad)
          << "\" x2=\"" << num(sx(0.0)) << "\" y2=\"" << num(kTitle + kPad + inner)
          << "\" stroke=\"#dddddd\"/>\n";
    }
    if (vp.min_y <= 0.0 && vp.max_y >= 0.0) {
      svg << "<line class=\"axis\" x1=\"" << num(kPad) << "\" y1=\"" << num(sy(0.0)) << "\" x2=\""
          << num(kPad + inner) << "\" y2=\"" << num(sy(0.0)) << "\" stroke=\"#dddddd\"/>\n";
    }
    for (const auto& a : plot.arrows) {
      if (a.zero_length) {
        svg << "<circle class=\"arrow zero\" cx=\"" << num(sx(a.tail.x)) << "\" cy=\""
            << num(sy(a.tail.y)) << "\" r=\"2.50\" fill=\"#b22222\"/>\n";
      } else {
        svg << "<line class=\"arrow\" x1=\"" << num(sx(a.tail.x)) << "\" y1=\"" << num(sy(a.tail.y))
            << "\" x2=\"" << num(sx(a.head.x)) << "\" y2=\"" << num(sy(a.head.y))
            << "\" stroke=\"#1f4e79\" stroke-width=\"1.2\" marker-end=\"url(#arrowhead)\"/>\n";
      }
      svg << "<text class=\"label\" x=\"" << num(sx(a.head.x) + 3.0) << "\" y=\""
          << num(sy(a.head.y) - 3.0) << "\" font-family=\"sans-serif\" font-size=\"8\">"
          << xml_escape(a.label) << "</text>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_plot_csv(std::ostream& out, const std::vector<ArrowPlot>& plots) {
  csv::write_row(out, {"panel", "tail_x", "tail_y", "head_x", "head_y", "label"});
  for (const auto& plot : plots) {
    for (const auto& a : plot.arrows) {
      csv::write_row(out, {plot.title, format_double(a.tail.x), format_double(a.tail.y),
                           format_double(a.head.x), format_double(a.head.y), a.label});
    }
  }
}

}  // namespace analogy
