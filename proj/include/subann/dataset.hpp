#ifndef SUBANN_DATASET_HPP
#define SUBANN_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "subann/components.hpp"

namespace subann {

struct ColumnSchema {
  std::string name;
  FeatureKind kind = FeatureKind::Real;
  std::int32_t cardinality = 0;               // categorical only, >= 2
  std::vector<std::string> levels;            // categorical label strings
};

struct DatasetSchema {
  std::vector<ColumnSchema> columns;
  std::int64_t rows = 0;
};

/// Columnar typed dataset. Rows are addressed by index in [0, n_rows).
class Dataset {
 public:
  using BoolColumn = std::vector<std::uint8_t>;
  using CatColumn = std::vector<std::int32_t>;
  using RealColumn = std::vector<double>;
  using Column = std::variant<BoolColumn, CatColumn, RealColumn>;

  Dataset() = default;
  Dataset(DatasetSchema schema, std::vector<Column> columns)
      : schema_(std::move(schema)), columns_(std::move(columns)) {
    if (schema_.columns.size() != columns_.size())
      throw std::invalid_argument("schema/column count mismatch");
  }

  std::int64_t n_rows() const { return schema_.rows; }
  std::int64_t n_features() const { return std::int64_t(columns_.size()); }
  const DatasetSchema& schema() const { return schema_; }

  Datum get(std::int64_t row, std::int64_t col) const {
    const Column& c = columns_[std::size_t(col)];
    switch (c.index()) {
      case 0: return Datum::boolean(std::get<BoolColumn>(c)[std::size_t(row)] != 0);
      case 1: return Datum::categorical(std::get<CatColumn>(c)[std::size_t(row)]);
      default: return Datum::real(std::get<RealColumn>(c)[std::size_t(row)]);
    }
  }

  /// Copies the selected rows into a new dataset with the same schema.
  Dataset subset(const std::vector<std::int64_t>& rows) const {
    std::vector<Column> cols;
    cols.reserve(columns_.size());
    for (const Column& c : columns_) {
      cols.push_back(std::visit(
          [&rows](const auto& v) -> Column {
            std::decay_t<decltype(v)> out;
            out.reserve(rows.size());
            for (std::int64_t r : rows) out.push_back(v[std::size_t(r)]);
            return out;
          },
          c));
    }
    DatasetSchema s = schema_;
    s.rows = std::int64_t(rows.size());
    return Dataset(std::move(s), std::move(cols));
  }

  /// FNV-1a over schema and column bytes; identifies dataset content in manifests.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* data, std::size_t len) {
      const auto* p = static_cast<const unsigned char*>(data);
      for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
      }
    };
    mix(&schema_.rows, sizeof(schema_.rows));
    for (const auto& cs : schema_.columns) {
      mix(cs.name.data(), cs.name.size());
      mix(&cs.kind, sizeof(cs.kind));
      mix(&cs.cardinality, sizeof(cs.cardinality));
    }
    for (const Column& c : columns_) {
      std::visit([&mix](const auto& v) {
        if (!v.empty()) mix(v.data(), v.size() * sizeof(v[0]));
      }, c);
    }
    return h;
  }

  // empirical summaries consumed by default priors and hyper grids
  std::vector<double> level_frequencies(std::int64_t col, double smoothing = 1.0) const {
    const auto& cs = schema_.columns[std::size_t(col)];
    if (cs.kind != FeatureKind::Categorical)
      throw std::invalid_argument("level_frequencies: not a categorical column");
    std::vector<double> freq(std::size_t(cs.cardinality), smoothing);
    for (std::int32_t v : std::get<CatColumn>(columns_[std::size_t(col)]))
      freq[std::size_t(v)] += 1.0;
    const double total = double(schema_.rows) + smoothing * double(cs.cardinality);
    for (double& f : freq) f /= total;
    return freq;
  }

  MeanVariance real_summary(std::int64_t col) const {
    const auto& v = std::get<RealColumn>(columns_[std::size_t(col)]);
    return mean_variance(v);
  }

  std::pair<double, double> real_range(std::int64_t col) const {
    const auto& v = std::get<RealColumn>(columns_[std::size_t(col)]);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return {*lo, *hi};
  }

  const Column& column(std::int64_t col) const { return columns_[std::size_t(col)]; }

 private:
  DatasetSchema schema_;
  std::vector<Column> columns_;
};

// ---------------------------------------------------------------------------
// Schema strings: comma-separated kind tokens, e.g. "bool,cat4,real".

inline std::vector<ColumnSchema> parse_schema_string(const std::string& spec) {
  std::vector<ColumnSchema> out;
  std::istringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    ColumnSchema cs;
    if (tok == "bool") {
      cs.kind = FeatureKind::Boolean;
    } else if (tok == "real") {
      cs.kind = FeatureKind::Real;
    } else if (tok.rfind("cat", 0) == 0) {
      cs.kind = FeatureKind::Categorical;
      cs.cardinality = std::int32_t(std::stol(tok.substr(3)));
      if (cs.cardinality < 2)
        throw std::invalid_argument("schema: categorical cardinality must be >= 2");
    } else {
      throw std::invalid_argument("schema: unknown kind token '" + tok + "'");
    }
    out.push_back(std::move(cs));
  }
  if (out.empty()) throw std::invalid_argument("schema: at least one column required");
  return out;
}

// ---------------------------------------------------------------------------
// CSV ingest. Header row of column names; fields split on commas (no quoting);
// missing values are rejected. With no declared schema a column is real if
// every value parses as a finite number, else categorical with levels in
// first-appearance order.

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  out.push_back(field);
  return out;
}

inline bool parse_finite_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == s.size() && std::isfinite(out);
}

[[noreturn]] inline void csv_error(const std::string& path, std::int64_t row,
                                   std::int64_t col, const std::string& what) {
  throw std::runtime_error(path + ": row " + std::to_string(row) + ", column " +
                           std::to_string(col) + ": " + what);
}

}  // namespace detail

/// Reads a rectangular CSV. `declared` is empty for "infer"; otherwise one
/// ColumnSchema per file column (names are taken from the header either way).
inline Dataset ingest_csv(const std::string& path,
                          std::vector<ColumnSchema> declared = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  const std::vector<std::string> header = detail::split_csv_line(line);
  const std::size_t ncols = header.size();
  if (ncols == 0) throw std::runtime_error(path + ": no columns");

  if (!declared.empty() && declared.size() != ncols)
    throw std::runtime_error(path + ": schema declares " +
                             std::to_string(declared.size()) + " columns, file has " +
                             std::to_string(ncols));

  std::vector<std::vector<std::string>> raw(ncols);
  std::int64_t nrows = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != ncols)
      detail::csv_error(path, nrows + 2, std::int64_t(fields.size()),
                        "ragged row: expected " + std::to_string(ncols) +
                            " fields, got " + std::to_string(fields.size()));
    for (std::size_t c = 0; c < ncols; ++c) {
      if (fields[c].empty())
        detail::csv_error(path, nrows + 2, std::int64_t(c + 1), "missing value");
      raw[c].push_back(fields[c]);
    }
    ++nrows;
  }
  if (nrows == 0) throw std::runtime_error(path + ": no data rows");

  const bool infer = declared.empty();
  if (infer) declared.resize(ncols);

  DatasetSchema schema;
  schema.rows = nrows;
  std::vector<Dataset::Column> columns;
  for (std::size_t c = 0; c < ncols; ++c) {
    ColumnSchema cs = declared[c];
    cs.name = header[c];
    if (infer) {
      double tmp;
      bool all_real = true;
      for (const auto& s : raw[c])
        if (!detail::parse_finite_double(s, tmp)) { all_real = false; break; }
      cs.kind = all_real ? FeatureKind::Real : FeatureKind::Categorical;
    }
    switch (cs.kind) {
      case FeatureKind::Real: {
        Dataset::RealColumn col(std::size_t(nrows));
        for (std::int64_t r = 0; r < nrows; ++r) {
          if (!detail::parse_finite_double(raw[c][std::size_t(r)], col[std::size_t(r)]))
            detail::csv_error(path, r + 2, std::int64_t(c + 1),
                              "unparseable real value '" + raw[c][std::size_t(r)] + "'");
        }
        columns.emplace_back(std::move(col));
        break;
      }
      case FeatureKind::Boolean: {
        Dataset::BoolColumn col(std::size_t(nrows));
        for (std::int64_t r = 0; r < nrows; ++r) {
          const std::string& s = raw[c][std::size_t(r)];
          if (s == "0" || s == "false") col[std::size_t(r)] = 0;
          else if (s == "1" || s == "true") col[std::size_t(r)] = 1;
          else detail::csv_error(path, r + 2, std::int64_t(c + 1),
                                 "unparseable boolean '" + s + "'");
        }
        columns.emplace_back(std::move(col));
        break;
      }
      case FeatureKind::Categorical: {
        Dataset::CatColumn col(std::size_t(nrows));
        std::vector<std::string> levels = cs.levels;
        for (std::int64_t r = 0; r < nrows; ++r) {
          const std::string& s = raw[c][std::size_t(r)];
          auto it = std::find(levels.begin(), levels.end(), s);
          if (it == levels.end()) {
            if (cs.cardinality > 0 && std::int64_t(levels.size()) >= cs.cardinality)
              detail::csv_error(path, r + 2, std::int64_t(c + 1),
                                "level '" + s + "' exceeds declared cardinality " +
                                    std::to_string(cs.cardinality));
            levels.push_back(s);
            it = levels.end() - 1;
          }
          col[std::size_t(r)] = std::int32_t(it - levels.begin());
        }
        if (cs.cardinality == 0) cs.cardinality = std::int32_t(levels.size());
        if (std::int64_t(levels.size()) < 2 && cs.cardinality < 2)
          detail::csv_error(path, 1, std::int64_t(c + 1),
                            "categorical column needs cardinality >= 2");
        cs.levels = std::move(levels);
        columns.emplace_back(std::move(col));
        break;
      }
    }
    schema.columns.push_back(std::move(cs));
  }
  return Dataset(std::move(schema), std::move(columns));
}

inline void write_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  const auto& cols = ds.schema().columns;
  for (std::size_t c = 0; c < cols.size(); ++c)
    out << (c ? "," : "") << cols[c].name;
  out << "\n";
  out.precision(17);
  for (std::int64_t r = 0; r < ds.n_rows(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out << ",";
      const Datum d = ds.get(r, std::int64_t(c));
      switch (d.kind) {
        case FeatureKind::Boolean: out << int(d.b); break;
        case FeatureKind::Categorical:
          if (!cols[c].levels.empty()) out << cols[c].levels[std::size_t(d.level)];
          else out << d.level;
          break;
        case FeatureKind::Real: out << d.x; break;
      }
    }
    out << "\n";
  }
}

}  // namespace subann

#endif  // SUBANN_DATASET_HPP
