#include "llk/table_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "llk/error.hpp"
#include "llk/report.hpp"

namespace llk {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

double expect_double(std::string_view s, const std::string& what) {
  double v = 0.0;
  if (!parse_double(s, v)) throw DataError("model file: invalid number for " + what);
  return v;
}

std::size_t expect_count(std::string_view s, const std::string& what) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError("model file: invalid count for " + what);
  }
  return v;
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("CSV has no column named '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t row_no = 0;
  std::vector<double> cells;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (!have_header) {
      // Strip a UTF-8 byte-order mark.
      std::string first(fields[0]);
      if (first.rfind("\xEF\xBB\xBF", 0) == 0) first.erase(0, 3);
      t.header.push_back(first);
      for (std::size_t j = 1; j < fields.size(); ++j) t.header.emplace_back(fields[j]);
      for (const auto& h : t.header) {
        if (h.empty()) throw DataError("CSV row 1: empty column name");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw DataError("CSV row " + std::to_string(row_no) + ": expected " +
                      std::to_string(t.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_double(fields[j], v) || !std::isfinite(v)) {
        throw DataError("CSV row " + std::to_string(row_no) + ", column '" + t.header[j] +
                        "': not a finite number: '" + std::string(fields[j]) + "'");
      }
      cells.push_back(v);
    }
  }
  if (!have_header) throw DataError("CSV is empty (header row required)");
  t.body.cols = t.header.size();
  t.body.rows = cells.size() / t.body.cols;
  t.body.data = std::move(cells);
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv(in);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << r[j];
    out << '\n';
  }
}

Dataset dataset_from_csv(const CsvTable& table, std::string_view target,
                         const GlmFamily& family, std::size_t classes) {
  const std::size_t tcol = table.column(target);
  const std::size_t n = table.body.rows;
  if (n == 0) throw DataError("CSV has no data rows");
  const std::size_t d = table.header.size() - 1;
  Dataset ds;
  ds.features = Matrix(n, d);
  ds.targets.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t jj = 0;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (j == tcol) {
        ds.targets[i] = table.body(i, j);
      } else {
        ds.features(i, jj++) = table.body(i, j);
      }
    }
  }
  if (family.name == Family::kMultinomial) {
    if (classes == 0) {
      const double mx = *std::max_element(ds.targets.begin(), ds.targets.end());
      classes = mx >= 1.0 ? static_cast<std::size_t>(mx) + 1 : 2;
    }
    ds.classes = classes;
  }
  try {
    ds.validate(family);
  } catch (const DomainError& e) {
    // Dataset rows are 0-based; CSV rows count the header.
    throw DataError(std::string("invalid data for column '") + std::string(target) + "': " + e.what());
  }
  return ds;
}

void write_model(std::ostream& out, const Model& m) {
  out << "llk-model 1\n";
  out << "family " << family_name(m.family.name) << '\n';
  out << "link " << link_name(m.family.link) << '\n';
  out << "tweedie_p " << format_number(m.family.tweedie_p) << '\n';
  out << "dispersion " << format_number(m.family.dispersion) << '\n';
  out << "features " << m.features << '\n';
  out << "classes " << m.classes << '\n';
  if (!m.feature_names.empty()) {
    out << "feature_names";
    for (const auto& n : m.feature_names) out << ' ' << n;
    out << '\n';
  }
  if (!m.target_name.empty()) out << "target " << m.target_name << '\n';
  out << "weights " << m.weights.rows << ' ' << m.weights.cols << '\n';
  for (std::size_t r = 0; r < m.weights.rows; ++r) {
    for (std::size_t c = 0; c < m.weights.cols; ++c) {
      out << (c ? " " : "") << format_number(m.weights(r, c));
    }
    out << '\n';
  }
}

Model read_model(std::istream& in) {
  Model m;
  std::string line;
  if (!std::getline(in, line) || trim(line) != "llk-model 1") {
    throw DataError("model file: missing 'llk-model 1' header");
  }
  bool have_weights = false;
  bool have_features = false;
  bool have_family = false;
  while (std::getline(in, line)) {
    const auto fields = split(trim(line), ' ');
    if (fields.empty() || fields[0].empty()) continue;
    const std::string key(fields[0]);
    auto value = [&](std::size_t i = 1) -> std::string_view {
      if (fields.size() <= i) throw DataError("model file: missing value for '" + key + "'");
      return fields[i];
    };
    try {
      if (key == "family") {
        m.family.name = parse_family(value());
        have_family = true;
      } else if (key == "link") {
        m.family.link = parse_link(value());
      } else if (key == "tweedie_p") {
        m.family.tweedie_p = expect_double(value(), key);
      } else if (key == "dispersion") {
        m.family.dispersion = expect_double(value(), key);
      } else if (key == "features") {
        m.features = expect_count(value(), key);
        have_features = true;
      } else if (key == "classes") {
        m.classes = expect_count(value(), key);
      } else if (key == "feature_names") {
        for (std::size_t i = 1; i < fields.size(); ++i) m.feature_names.emplace_back(fields[i]);
      } else if (key == "target") {
        m.target_name = std::string(value());
      } else if (key == "weights") {
        const std::size_t rows = expect_count(value(1), "weights rows");
        const std::size_t cols = expect_count(value(2), "weights cols");
        m.weights = Matrix(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
          if (!std::getline(in, line)) throw DataError("model file: truncated weight matrix");
          const auto cells = split(trim(line), ' ');
          if (cells.size() != cols) throw DataError("model file: weight row has wrong width");
          for (std::size_t c = 0; c < cols; ++c) {
            m.weights(r, c) = expect_double(cells[c], "weight");
          }
        }
        have_weights = true;
      } else {
        throw DataError("model file: unknown key '" + key + "'");
      }
    } catch (const DomainError& e) {
      throw DataError(std::string("model file: ") + e.what());
    }
  }
  if (!have_family || !have_features || !have_weights) {
    throw DataError("model file: family, features and weights are required");
  }
  if (m.weights.rows != m.features + 1) {
    throw DataError("model file: weight rows must equal features + 1");
  }
  const std::size_t want_cols = m.family.name == Family::kMultinomial ? m.classes : 1;
  if (m.weights.cols != want_cols) throw DataError("model file: weight columns do not match classes");
  try {
    m.family.validate();
  } catch (const DomainError& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  return m;
}

void write_model_file(const std::string& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_model(out, model);
  if (!out) throw DataError("error writing '" + path + "'");
}

Model read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_model(in);
}

}  // namespace llk
