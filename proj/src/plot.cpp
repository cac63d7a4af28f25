#include "iht/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "iht/errors.hpp"
#include "iht/format.hpp"

namespace iht {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string num(double x) {
  if (std::abs(x) < 5e-3) return "0";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Roughly five round tick values covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0) * mag;
  std::vector<double> ticks;
  for (double t = std::floor(lo / step) * step; t <= hi + step * 0.5; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

std::string tick_label(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
  return std::string(buf, res.ptr);
}

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;
  double left, top, width, height;

  double px(double x) const { return left + (x - x_lo) / (x_hi - x_lo) * width; }
  double py(double y) const { return top + height - (y - y_lo) / (y_hi - y_lo) * height; }
};

void header(std::ostringstream& svg, double width, double height, const std::string& title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
}

void y_axis(std::ostringstream& svg, const Frame& f, const std::vector<double>& ticks) {
  for (double t : ticks) {
    const double y = f.py(t);
    svg << "<line x1=\"" << num(f.left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(f.left + f.width) << "\" y2=\""
        << num(y) << "\" stroke=\"#e0e0e0\"/>\n"
        << "<text x=\"" << num(f.left - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << tick_label(t)
        << "</text>\n";
  }
  svg << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\"" << num(f.width) << "\" height=\""
      << num(f.height) << "\" fill=\"none\" stroke=\"black\"/>\n";
}

}  // namespace

std::string svg_box_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                         const std::vector<BoxPoint>& points) {
  std::vector<BoxPoint> valid;
  for (const auto& p : points)
    if (p.stats.n > 0) valid.push_back(p);

  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  if (!valid.empty()) {
    x_lo = valid.front().x;
    x_hi = valid.front().x;
    y_lo = valid.front().stats.min;
    y_hi = valid.front().stats.max;
    for (const auto& p : valid) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.stats.min);
      y_hi = std::max(y_hi, p.stats.max);
    }
  }
  const std::vector<double> ticks = nice_ticks(y_lo, y_hi);
  Frame f{x_lo - 0.75, x_hi + 0.75, ticks.front(), ticks.back(), kLeft, kTop, kWidth - kLeft - kRight,
          kHeight - kTop - kBottom};

  std::ostringstream svg;
  header(svg, kWidth, kHeight, title);
  y_axis(svg, f, ticks);
  const double half = std::min(12.0, 0.3 * f.width / (f.x_hi - f.x_lo));
  for (const auto& p : valid) {
    const double x = f.px(p.x);
    const Stats& st = p.stats;
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(f.py(st.min)) << "\" x2=\"" << num(x) << "\" y2=\""
        << num(f.py(st.max)) << "\" stroke=\"#555\"/>\n"
        << "<rect x=\"" << num(x - half) << "\" y=\"" << num(f.py(st.q3)) << "\" width=\"" << num(2 * half)
        << "\" height=\"" << num(std::max(0.5, f.py(st.q1) - f.py(st.q3)))
        << "\" fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n"
        << "<line x1=\"" << num(x - half) << "\" y1=\"" << num(f.py(st.median)) << "\" x2=\"" << num(x + half)
        << "\" y2=\"" << num(f.py(st.median)) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << num(x) << "\" y=\"" << num(f.top + f.height + 16) << "\" text-anchor=\"middle\">"
        << tick_label(p.x) << "</text>\n";
  }
  svg << "<text x=\"" << num(f.left + f.width / 2) << "\" y=\"" << num(kHeight - 12)
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
      << "<text transform=\"translate(16 " << num(f.top + f.height / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n"
      << "</svg>\n";
  return svg.str();
}

std::string svg_bar_panels(const std::string& title, const std::vector<std::string>& labels,
                           const std::vector<BarPanel>& panels) {
  const double panel_h = 220.0;
  const double height = kTop + static_cast<double>(panels.size()) * (panel_h + 30.0) + 20.0;
  std::ostringstream svg;
  header(svg, kWidth, height, title);
  const double n = static_cast<double>(std::max<std::size_t>(1, labels.size()));
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    double lo = 0.0, hi = 0.0;
    for (double v : panel.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const std::vector<double> ticks = nice_ticks(lo, hi);
    const double top = kTop + static_cast<double>(p) * (panel_h + 30.0) + 16.0;
    Frame f{0.0, n, ticks.front(), ticks.back(), kLeft, top, kWidth - kLeft - kRight, panel_h - 40.0};
    svg << "<text x=\"" << num(f.left) << "\" y=\"" << num(top - 4) << "\">" << escape(panel.title) << "</text>\n";
    y_axis(svg, f, ticks);
    const double slot = f.width / n;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const double v = i < panel.values.size() ? panel.values[i] : 0.0;
      const double y0 = f.py(0.0);
      const double y1 = f.py(v);
      svg << "<rect x=\"" << num(f.left + slot * (static_cast<double>(i) + 0.15)) << "\" y=\""
          << num(std::min(y0, y1)) << "\" width=\"" << num(slot * 0.7) << "\" height=\"" << num(std::abs(y1 - y0))
          << "\" fill=\"" << (v >= 0 ? "#3182bd" : "#e6550d") << "\"/>\n"
          << "<text x=\"" << num(f.left + slot * (static_cast<double>(i) + 0.5)) << "\" y=\""
          << num(f.top + f.height + 14) << "\" text-anchor=\"middle\" font-size=\"10\">" << escape(labels[i])
          << "</text>\n";
    }
    svg << "<line x1=\"" << num(f.left) << "\" y1=\"" << num(f.py(0.0)) << "\" x2=\"" << num(f.left + f.width)
        << "\" y2=\"" << num(f.py(0.0)) << "\" stroke=\"black\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

const std::vector<FigureSpec>& figure_specs() {
  static const std::vector<FigureSpec> specs = {
      {"learning_rate", "gamma", "Estimated learning rate per sparsity level", "learning rate 1/L2s"},
      {"train_loss", "train_loss", "Training loss per sparsity level", "train loss"},
      {"test_loss", "test_loss", "Test loss per sparsity level", "test loss"},
      {"train_acc", "train_acc", "Training accuracy per sparsity level", "train accuracy"},
      {"test_acc", "test_acc", "Test accuracy per sparsity level", "test accuracy"},
      {"params", "", "Trained parameters and gradient", ""},
  };
  return specs;
}

std::vector<std::filesystem::path> write_figures(const std::vector<ExperimentRecord>& records,
                                                 const ExperimentRecord& showcase,
                                                 const std::filesystem::path& out_dir) {
  std::vector<ExperimentRecord> sparse;
  for (const auto& r : records)
    if (r.kind == RunKind::kSparse) sparse.push_back(r);
  if (sparse.empty()) throw InvalidArgument("write_figures: no sparse records");
  const std::vector<SummaryGroup> groups = aggregate(sparse);

  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    written.push_back(path);
  };

  for (const FigureSpec& spec : figure_specs()) {
    if (spec.metric.empty()) {
      const OneLayerClassifier model;
      const auto names = model.param_names();
      std::ostringstream csv;
      csv << "parameter,theta,gradient\n";
      for (std::size_t i = 0; i < names.size(); ++i) {
        const double th = i < showcase.final_theta.size() ? showcase.final_theta[i] : 0.0;
        const double gr = i < showcase.final_gradient.size() ? showcase.final_gradient[i] : 0.0;
        csv << names[i] << ',' << format_real(th) << ',' << format_real(gr) << '\n';
      }
      const std::string title = spec.title + " (s=" + std::to_string(showcase.s) + ", data " +
                                std::to_string(showcase.seeds.data) + ", init " + std::to_string(showcase.seeds.init) +
                                ", support " + std::to_string(showcase.seeds.support) + ")";
      emit(spec.stem + ".csv", csv.str());
      emit(spec.stem + ".svg", svg_bar_panels(title, names,
                                              {{"trained parameters", showcase.final_theta.values()},
                                               {"gradient at trained parameters", showcase.final_gradient.values()}}));
      continue;
    }
    std::vector<BoxPoint> points;
    std::ostringstream csv;
    csv << "s,n,min,q1,median,q3,max,mean\n";
    for (const auto& g : groups) {
      const Stats& st = g.metrics.at(spec.metric);
      points.push_back({static_cast<double>(g.s), st});
      csv << g.s << ',' << st.n << ',' << format_real(st.min) << ',' << format_real(st.q1) << ','
          << format_real(st.median) << ',' << format_real(st.q3) << ',' << format_real(st.max) << ','
          << format_real(st.mean) << '\n';
    }
    emit(spec.stem + ".csv", csv.str());
    emit(spec.stem + ".svg", svg_box_plot(spec.title, "sparsity level s", spec.y_label, points));
  }
  return written;
}

}  // namespace iht
