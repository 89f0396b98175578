// Copyright 2026 The ldpbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdio>
#include <string>

#include "ldp/bench.hpp"
#include "ldp/error.hpp"
#include "ldp/text.hpp"

namespace fs = std::filesystem;

namespace ldp {
namespace {

// Plot geometry, in SVG user units.
constexpr double kWidth = 760;
constexpr double kHeight = 440;
constexpr double kLeft = 64;
constexpr double kRight = 200;
constexpr double kTop = 40;
constexpr double kBottom = 56;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string epsilon_text(double beta) {
  return beta == 0.0 ? "inf" : shortest(1.0 / beta);
}

void require_nonempty(const BenchResult& result) {
  if (result.per_beta.empty()) {
    throw Error(Errc::kInvalidParameter, "bench result has no grid points");
  }
}

}  // namespace

std::string render_summary_csv(const BenchResult& result) {
  require_nonempty(result);
  std::string out =
      "beta,epsilon_per_pixel,best_train_accuracy,best_test_accuracy,"
      "best_epoch\n";
  for (const BetaResult& r : result.per_beta) {
    out += shortest(r.beta) + "," + epsilon_text(r.beta) + "," +
           shortest(r.best_train_accuracy) + "," +
           shortest(r.best_test_accuracy) + "," + std::to_string(r.best_epoch) +
           "\n";
  }
  return out;
}

std::string render_curves_csv(const BenchResult& result) {
  require_nonempty(result);
  std::string out = "beta,epoch,split,accuracy\n";
  for (const BetaResult& r : result.per_beta) {
    const std::string beta = shortest(r.beta);
    for (const EpochMetrics& m : r.per_epoch) {
      const std::string epoch = std::to_string(m.epoch);
      out += beta + "," + epoch + ",train," + shortest(m.train_accuracy) + "\n";
      out += beta + "," + epoch + ",test," + shortest(m.test_accuracy) + "\n";
    }
  }
  return out;
}

std::string render_curves_svg(const BenchResult& result) {
  require_nonempty(result);
  std::uint32_t max_epoch = 1;
  for (const BetaResult& r : result.per_beta) {
    max_epoch = std::max<std::uint32_t>(
        max_epoch, static_cast<std::uint32_t>(r.per_epoch.size()));
  }
  // A single epoch is drawn in the middle of a unit-wide domain.
  const double x_lo = max_epoch == 1 ? 0.5 : 1.0;
  const double x_hi = max_epoch == 1 ? 1.5 : static_cast<double>(max_epoch);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double epoch) {
    return kLeft + (epoch - x_lo) / (x_hi - x_lo) * plot_w;
  };
  auto sy = [&](double acc) { return kTop + (1.0 - acc) * plot_h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) +
         "\" height=\"" + fixed(kHeight) + "\" viewBox=\"0 0 " + fixed(kWidth) +
         " " + fixed(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(kLeft + plot_w / 2) + "\" y=\"22\" " +
         "text-anchor=\"middle\" font-size=\"15\">Test accuracy vs training "
         "epoch</text>\n";

  // Horizontal grid and accuracy ticks.
  for (int i = 0; i <= 5; ++i) {
    const double acc = i / 5.0;
    const std::string y = fixed(sy(acc));
    svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + y + "\" x2=\"" +
           fixed(kLeft + plot_w) + "\" y2=\"" + y +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + fixed(kLeft - 6) + "\" y=\"" + fixed(sy(acc) + 4) +
           "\" text-anchor=\"end\">" + fixed(acc) + "</text>\n";
  }
  // Epoch ticks, at most about ten.
  const std::uint32_t step = std::max<std::uint32_t>(1, (max_epoch + 9) / 10);
  for (std::uint32_t e = 1; e <= max_epoch; e += step) {
    const std::string x = fixed(sx(e));
    svg += "<line x1=\"" + x + "\" y1=\"" + fixed(kTop + plot_h) + "\" x2=\"" +
           x + "\" y2=\"" + fixed(kTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + fixed(kTop + plot_h + 18) +
           "\" text-anchor=\"middle\">" + std::to_string(e) + "</text>\n";
  }
  svg += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" +
         fixed(plot_w) + "\" height=\"" + fixed(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + fixed(kLeft + plot_w / 2) + "\" y=\"" +
         fixed(kHeight - 14) + "\" text-anchor=\"middle\">Epoch</text>\n";
  svg += "<text x=\"16\" y=\"" + fixed(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fixed(kTop + plot_h / 2) + ")\">Test accuracy</text>\n";

  for (std::size_t s = 0; s < result.per_beta.size(); ++s) {
    const BetaResult& r = result.per_beta[s];
    const std::string color = kPalette[s % std::size(kPalette)];
    const std::string beta = shortest(r.beta);
    std::string points;
    for (const EpochMetrics& m : r.per_epoch) {
      if (!points.empty()) points += ' ';
      points += fixed(sx(m.epoch)) + "," + fixed(sy(m.test_accuracy));
    }
    svg += "<g class=\"series\" data-beta=\"" + beta + "\">\n";
    svg += "<polyline fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    for (const EpochMetrics& m : r.per_epoch) {
      svg += "<circle cx=\"" + fixed(sx(m.epoch)) + "\" cy=\"" +
             fixed(sy(m.test_accuracy)) + "\" r=\"2.5\" fill=\"" + color +
             "\"/>\n";
    }
    svg += "</g>\n";

    const double ly = kTop + 12 + 20.0 * static_cast<double>(s);
    const double lx = kLeft + plot_w + 16;
    svg += "<line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(ly) + "\" x2=\"" +
           fixed(lx + 24) + "\" y2=\"" + fixed(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    const std::string eps =
        r.beta == 0.0 ? std::string("∞") : shortest(1.0 / r.beta);
    svg += "<text x=\"" + fixed(lx + 30) + "\" y=\"" + fixed(ly + 4) +
           "\">β=" + beta + " (ε=" + eps + ")</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_report(const BenchResult& result, const fs::path& out_dir) {
  require_nonempty(result);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error(Errc::kIo,
                "cannot create " + out_dir.string() + ": " + ec.message());
  }
  write_file_atomic(out_dir / "summary.csv", render_summary_csv(result));
  write_file_atomic(out_dir / "curves.csv", render_curves_csv(result));
  write_file_atomic(out_dir / "curves.svg", render_curves_svg(result));
}

}  // namespace ldp
