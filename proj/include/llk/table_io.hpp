#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "llk/glm.hpp"

namespace llk {

/// Numeric CSV: comma separated, '.' decimal point, header row required, no
/// quoting, no missing cells.
struct CsvTable {
  std::vector<std::string> header;
  Matrix body;

  /// Index of `name` in the header; throws DataError if absent.
  std::size_t column(std::string_view name) const;
};

/// Throws DataError naming the offending row (1-based, header is row 1) and column.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Writes header and rows; cells printed with 17 significant digits. Empty
/// strings in `cells` are written as empty fields.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Splits `table` into features (every other column, in order) and the
/// target column. Multinomial class count is max label + 1 unless `classes`
/// is non-zero.
Dataset dataset_from_csv(const CsvTable& table, std::string_view target,
                         const GlmFamily& family, std::size_t classes = 0);

/// Fitted model as stored on disk.
struct Model {
  GlmFamily family;
  Matrix weights;
  std::size_t features = 0;
  std::size_t classes = 1;
  std::vector<std::string> feature_names;
  std::string target_name;
};

/// Line-oriented text format:
///
///   llk-model 1
///   family <name>
///   link <name>
///   tweedie_p <real>
///   dispersion <real>
///   features <d>
///   classes <K>
///   feature_names <name>...      (optional)
///   target <name>                (optional)
///   weights <rows> <cols>
///   <row 0: cols reals>          (one line per row, features first, bias last)
///
/// Reals are written with 17 significant digits.
void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);
void write_model_file(const std::string& path, const Model& model);
Model read_model_file(const std::string& path);

}  // namespace llk
