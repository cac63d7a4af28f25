#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "iht/experiments.hpp"

namespace iht {

// Minimal self-contained SVG charts; output depends only on the inputs.

struct BoxPoint {
  double x = 0.0;
  Stats stats;
};

// Whiskers min..max, box q1..q3, median bar, one box per x.
std::string svg_box_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                         const std::vector<BoxPoint>& points);

struct BarPanel {
  std::string title;
  std::vector<double> values;
};

// One bar chart per panel, stacked vertically, sharing category labels.
std::string svg_bar_panels(const std::string& title, const std::vector<std::string>& labels,
                           const std::vector<BarPanel>& panels);

struct FigureSpec {
  std::string stem;    // file name without extension
  std::string metric;  // summary metric, empty for the parameter chart
  std::string title;
  std::string y_label;
};

// learning_rate, train_loss, test_loss, train_acc, test_acc (vs s) and params.
const std::vector<FigureSpec>& figure_specs();

// Writes <stem>.svg and <stem>.csv for every figure under out_dir, using the
// sparse records for the per-s figures and `showcase` for the parameter chart.
// Returns the written paths. InvalidArgument when there are no sparse records.
std::vector<std::filesystem::path> write_figures(const std::vector<ExperimentRecord>& records,
                                                 const ExperimentRecord& showcase,
                                                 const std::filesystem::path& out_dir);

}  // namespace iht
