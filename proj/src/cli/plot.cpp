// Copyright 2026 The ips Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ips/cli/experiments.hpp"
#include "ips/core/error.hpp"
#include "ips/exclusion/exclusion.hpp"

namespace ips::cli {

namespace {

struct PlotSpec {
  const char* kind;
  const char* x;
  const char* y;
  const char* err;    // symmetric error column, or nullptr
  const char* lo;     // asymmetric band (lo, hi), or nullptr
  const char* hi;
  const char* group;  // one series per distinct value, or nullptr
  bool loglog;
  const char* xlabel;
  const char* ylabel;
};

constexpr PlotSpec kSpecs[] = {
    {"percolation-sweep", "p", "estimate", "stderr", nullptr, nullptr, "side", false, "bond density p",
     "crossing probability"},
    {"pc-estimate", "p", "estimate", "stderr", nullptr, nullptr, "side", false, "bond density p",
     "crossing probability"},
    {"contact-survival", "lambda", "estimate", "stderr", nullptr, nullptr, "horizon", false, "infection rate",
     "survival probability"},
    {"lambda-c", "lambda", "estimate", "stderr", nullptr, nullptr, "length", false, "infection rate",
     "P(survival to T)"},
    {"growth", "lambda", "mean_rate", "stderr", nullptr, nullptr, nullptr, false, "infection rate", "|A_T| / T"},
    {"ergodic-average", "lambda", "estimate", "stderr", nullptr, nullptr, nullptr, false, "infection rate",
     "time average"},
    {"nu-percolation", "lambda", "median_fraction", nullptr, "q25_fraction", "q75_fraction", nullptr, false,
     "infection rate", "largest cluster fraction"},
    {"exclusion-tagged", "t", "variance", "stderr", nullptr, nullptr, nullptr, true, "t", "Var X_t"},
};

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const char* name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw UsageError(std::string("csv lacks column \"") + name + "\"");
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& s, std::size_t line) {
  if (s.empty()) throw UsageError("empty cell on csv line " + std::to_string(line));
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw UsageError("non-numeric cell \"" + s + "\" on csv line " + std::to_string(line));
  return v;
}

Csv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  Csv csv;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (csv.columns.empty()) {
      csv.columns = std::move(cells);
      continue;
    }
    if (cells.size() != csv.columns.size())
      throw UsageError("csv line " + std::to_string(number) + " has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(csv.columns.size()));
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_cell(c, number));
    csv.rows.push_back(std::move(row));
  }
  if (csv.columns.empty()) throw UsageError("csv is empty");
  if (csv.rows.empty()) throw UsageError("csv has a header but no rows");
  return csv;
}

std::string py_number(double x) {
  const std::string s = format_number(x);
  if (s == "nan") return "float(\"nan\")";
  if (s == "inf" || s == "-inf") return "float(\"" + s + "\")";
  return s;
}

std::string py_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + py_number(v[i]);
  return s + "]";
}

std::string py_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '\\' || c == '"') out += '\\';
    out += c;
  }
  return out + "\"";
}

struct Series {
  std::string label;
  std::vector<double> x, y, err_lo, err_hi;
};

}  // namespace

std::filesystem::path emit_plot(const std::filesystem::path& csv_path, const std::string& kind,
                                std::optional<std::filesystem::path> output) {
  const PlotSpec* spec = nullptr;
  for (const auto& s : kSpecs)
    if (kind == s.kind) spec = &s;
  if (!spec) throw UsageError("no plot kind \"" + kind + "\"");

  const Csv csv = read_csv(csv_path);
  const std::size_t xi = csv.column(spec->x), yi = csv.column(spec->y);
  const std::size_t ei = spec->err ? csv.column(spec->err) : 0;
  const std::size_t loi = spec->lo ? csv.column(spec->lo) : 0;
  const std::size_t hii = spec->hi ? csv.column(spec->hi) : 0;

  std::map<double, Series> groups;
  for (const auto& row : csv.rows) {
    const double key = spec->group ? row[csv.column(spec->group)] : 0.0;
    Series& s = groups[key];
    if (s.label.empty() && spec->group) s.label = std::string(spec->group) + "=" + format_number(key);
    s.x.push_back(row[xi]);
    s.y.push_back(row[yi]);
    if (spec->err) {
      s.err_lo.push_back(row[ei]);
      s.err_hi.push_back(row[ei]);
    } else {
      s.err_lo.push_back(row[yi] - row[loi]);
      s.err_hi.push_back(row[hii] - row[yi]);
    }
  }

  std::ostringstream py;
  py << "#!/usr/bin/env python3\n"
     << "# Plot of " << csv_path.filename().string() << " (" << kind << "); writes a PNG next to this script.\n"
     << "import os\n\nimport matplotlib\n\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n\n"
     << "series = [\n";
  for (const auto& [key, s] : groups)
    py << "    {\"label\": " << py_string(s.label) << ", \"x\": " << py_list(s.x) << ", \"y\": " << py_list(s.y)
       << ", \"yerr\": [" << py_list(s.err_lo) << ", " << py_list(s.err_hi) << "]},\n";
  py << "]\n\nfig, ax = plt.subplots(figsize=(6.4, 4.4))\n"
     << "for s in series:\n"
     << "    ax.errorbar(s[\"x\"], s[\"y\"], yerr=s[\"yerr\"], marker=\"o\", ms=3, capsize=2, lw=1,"
     << " label=s[\"label\"] or None)\n";
  if (spec->loglog) {
    py << "ax.set_xscale(\"log\")\nax.set_yscale(\"log\")\n";
    const Series& s = groups.begin()->second;
    std::vector<double> weights;
    bool ok = s.x.size() >= 3;
    for (std::size_t i = 0; i < s.y.size() && ok; ++i) {
      ok = s.x[i] > 0.0 && s.y[i] > 0.0 && s.err_lo[i] > 0.0;
      if (ok) weights.push_back(s.y[i] * s.y[i] / (s.err_lo[i] * s.err_lo[i]));
    }
    std::optional<exclusion::ScalingFit> fit;
    if (ok) {
      try {
        fit = exclusion::fit_scaling_exponent(s.x, s.y, weights);
      } catch (const std::exception&) {
      }
    }
    if (fit) {
      char text[96];
      std::snprintf(text, sizeof text, "fitted slope %.3f +/- %.3f", fit->slope, fit->half_width);
      py << "slope, intercept = " << py_number(fit->slope) << ", " << py_number(fit->intercept) << "\n"
         << "xs = [min(series[0][\"x\"]), max(series[0][\"x\"])]\n"
         << "ax.plot(xs, [2.718281828459045 ** intercept * x ** slope for x in xs], \"--\", lw=1, color=\"gray\")\n"
         << "ax.annotate(" << py_string(text) << ", xy=(0.05, 0.92), xycoords=\"axes fraction\")\n";
    } else {
      py << "ax.annotate(\"fitted slope unavailable\", xy=(0.05, 0.92), xycoords=\"axes fraction\")\n";
    }
  }
  py << "ax.set_xlabel(" << py_string(spec->xlabel) << ")\n"
     << "ax.set_ylabel(" << py_string(spec->ylabel) << ")\n"
     << "if len(series) > 1:\n    ax.legend()\n"
     << "fig.tight_layout()\n"
     << "fig.savefig(os.path.splitext(os.path.abspath(__file__))[0] + \".png\", dpi=150)\n";

  std::filesystem::path out = output.value_or(std::filesystem::path(csv_path).replace_extension(".plot.py"));
  std::ofstream file(out, std::ios::binary);
  file << py.str();
  if (!file) throw std::runtime_error("cannot write " + out.string());
  return out;
}

}  // namespace ips::cli
