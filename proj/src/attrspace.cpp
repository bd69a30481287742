#include "cazsl/attrspace.hpp"

#include <cmath>
#include <unordered_set>

#include "cazsl/csv.hpp"

namespace cazsl::attrspace {

Eigen::Index SignatureView::class_index(const std::string& class_name) const {
  for (std::size_t j = 0; j < class_names->size(); ++j)
    if ((*class_names)[j] == class_name) return static_cast<Eigen::Index>(j);
  throw UnknownClass(class_name);
}

namespace {

void check_unique(const std::vector<std::string>& names, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second)
      throw DataError(std::string("duplicate ") + what + " name '" + n + "'");
}

}  // namespace

AttributeMatrix make_attribute_matrix(Eigen::MatrixXd values,
                                      std::vector<std::string> attribute_names,
                                      std::vector<std::string> class_names) {
  if (values.rows() == 0 || values.cols() == 0)
    throw EmptyMatrix("attribute matrix must have at least one attribute and one class");
  if (static_cast<Eigen::Index>(attribute_names.size()) != values.rows())
    throw DimensionMismatch("attribute name count does not match row count");
  if (static_cast<Eigen::Index>(class_names.size()) != values.cols())
    throw DimensionMismatch("class name count does not match column count");
  check_unique(attribute_names, "attribute");
  check_unique(class_names, "class");
  if (!values.allFinite())
    throw DataError("attribute matrix contains non-finite values");
  if ((values.array() < 0.0).any())
    throw DataError("attribute matrix contains negative values");
  AttributeMatrix a;
  a.values = std::move(values);
  a.attribute_names = std::move(attribute_names);
  a.class_names = std::move(class_names);
  // Unit-length columns are treated as already normalized so a round trip
  // through CSV keeps the flag.
  a.normalized = true;
  for (Eigen::Index j = 0; j < a.values.cols(); ++j)
    if (std::abs(a.values.col(j).norm() - 1.0) > 1e-9) {
      a.normalized = false;
      break;
    }
  return a;
}

AttributeMatrix normalize_columns(const AttributeMatrix& raw) {
  AttributeMatrix out = raw;
  for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
    const double norm = out.values.col(j).norm();
    if (norm == 0.0) throw AllZeroColumn(out.class_names[j]);
    out.values.col(j) /= norm;
  }
  out.normalized = true;
  return out;
}

AttributeMatrix complement(const AttributeMatrix& a) {
  if (!a.normalized)
    throw NotNormalized("complement requires a column-normalized matrix");
  AttributeMatrix out;
  out.values = (1.0 - a.values.array()).matrix();
  out.class_names = a.class_names;
  out.attribute_names.reserve(a.attribute_names.size());
  for (const auto& n : a.attribute_names) out.attribute_names.push_back("not_" + n);
  out.normalized = true;
  return out;
}

ExpandedAttributeMatrix expand(const AttributeMatrix& a) {
  if (!a.normalized)
    throw NotNormalized("expansion requires a column-normalized matrix");
  if (a.values.rows() == 0 || a.values.cols() == 0)
    throw EmptyMatrix("cannot expand an empty matrix");
  const AttributeMatrix bar = complement(a);
  ExpandedAttributeMatrix s;
  s.original_rows = a.values.rows();
  s.values.resize(2 * a.values.rows(), a.values.cols());
  s.values.topRows(a.values.rows()) = a.values;
  s.values.bottomRows(a.values.rows()) = bar.values;
  s.attribute_names = a.attribute_names;
  s.attribute_names.insert(s.attribute_names.end(), bar.attribute_names.begin(),
                           bar.attribute_names.end());
  s.class_names = a.class_names;
  s.source = a;
  return s;
}

double class_entropy(const Eigen::VectorXd& column) {
  if (column.size() == 0) throw AllZero("entropy of an empty column is undefined");
  if ((column.array() < 0.0).any())
    throw DataError("entropy input must be non-negative");
  const double mass = column.sum();
  if (mass <= 0.0) throw AllZero("entropy of zero mass is undefined");
  double h = 0.0;
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    const double p = column[i] / mass;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::vector<EntropyRecord> entropy_report(const AttributeMatrix& a,
                                          const ExpandedAttributeMatrix& s) {
  if (a.class_names.empty() || a.class_names != s.class_names)
    throw ClassMismatch("attribute matrix and expanded matrix must list the same classes");
  std::vector<EntropyRecord> out;
  out.reserve(a.class_names.size());
  for (Eigen::Index j = 0; j < a.values.cols(); ++j) {
    EntropyRecord rec;
    rec.class_name = a.class_names[j];
    rec.entropy_original = class_entropy(a.values.col(j));
    rec.entropy_expanded = class_entropy(s.values.col(j));
    out.push_back(rec);
  }
  return out;
}

bool looks_expanded(const Eigen::MatrixXd& values, double tol) {
  if (values.rows() < 2 || values.rows() % 2 != 0) return false;
  const Eigen::Index m = values.rows() / 2;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      if (std::abs(values(i, j) + values(i + m, j) - 1.0) > tol) return false;
  return true;
}

AttributeMatrix load_attribute_csv(const std::string& path) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw ParseError(path, 1, "empty attribute file");
  auto header = csv::split_line(lines[0]);
  if (header.size() < 2 || csv::trim(header[0]) != "attribute")
    throw ParseError(path, 1, "expected header 'attribute,<class_1>,...'");
  std::vector<std::string> class_names;
  for (std::size_t j = 1; j < header.size(); ++j) {
    const std::string name = csv::trim(header[j]);
    if (name.empty()) throw ParseError(path, 1, "empty class name in header");
    class_names.push_back(name);
  }
  std::vector<std::string> attribute_names;
  std::vector<Eigen::VectorXd> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (csv::trim(lines[li]).empty()) continue;
    auto fields = csv::split_line(lines[li]);
    if (fields.size() != header.size())
      throw ParseError(path, li + 1,
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    const std::string name = csv::trim(fields[0]);
    if (name.empty()) throw ParseError(path, li + 1, "empty attribute name");
    attribute_names.push_back(name);
    Eigen::VectorXd row(class_names.size());
    for (std::size_t j = 1; j < fields.size(); ++j) {
      try {
        row[static_cast<Eigen::Index>(j - 1)] = csv::parse_double(fields[j], path, li + 1);
      } catch (const ParseError& e) {
        throw ParseError(path, li + 1,
                         "column " + std::to_string(j + 1) + ": " + e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path, 1, "attribute file has no data rows");
  Eigen::MatrixXd values(rows.size(), class_names.size());
  for (std::size_t i = 0; i < rows.size(); ++i) values.row(static_cast<Eigen::Index>(i)) = rows[i];
  return make_attribute_matrix(std::move(values), std::move(attribute_names),
                               std::move(class_names));
}

std::string attribute_csv(const Eigen::MatrixXd& values,
                          const std::vector<std::string>& attribute_names,
                          const std::vector<std::string>& class_names) {
  std::string out = "attribute";
  for (const auto& c : class_names) out += "," + c;
  out += "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out += attribute_names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      out += "," + csv::format_double(values(i, j));
    out += "\n";
  }
  return out;
}

std::string attribute_csv(const AttributeMatrix& a) {
  return attribute_csv(a.values, a.attribute_names, a.class_names);
}

std::string attribute_csv(const ExpandedAttributeMatrix& s) {
  return attribute_csv(s.values, s.attribute_names, s.class_names);
}

}  // namespace cazsl::attrspace
