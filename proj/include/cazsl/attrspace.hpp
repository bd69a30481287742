#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cazsl/errors.hpp"

namespace cazsl::attrspace {

// Class-attribute association matrix: rows = attributes, columns = classes.
// `normalized` marks that the values live in the [0,1] per-column normalized
// domain (set by normalize_columns, preserved by complement).
struct AttributeMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> attribute_names;
  std::vector<std::string> class_names;
  bool normalized = false;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

// [A; 1-A] stack: the top block is the normalized source matrix, the bottom
// block its complement.  original_rows is the row count of the source.
struct ExpandedAttributeMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> attribute_names;
  std::vector<std::string> class_names;
  Eigen::Index original_rows = 0;
  AttributeMatrix source;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

// Read-only view over either representation so downstream consumers can take
// plain or expanded signatures interchangeably.
struct SignatureView {
  const Eigen::MatrixXd* values;
  const std::vector<std::string>* attribute_names;
  const std::vector<std::string>* class_names;
  bool normalized;

  SignatureView(const AttributeMatrix& a)
      : values(&a.values), attribute_names(&a.attribute_names),
        class_names(&a.class_names), normalized(a.normalized) {}
  SignatureView(const ExpandedAttributeMatrix& s)
      : values(&s.values), attribute_names(&s.attribute_names),
        class_names(&s.class_names), normalized(true) {}

  Eigen::Index rows() const { return values->rows(); }
  Eigen::Index cols() const { return values->cols(); }
  // Column index of a class name; throws UnknownClass.
  Eigen::Index class_index(const std::string& class_name) const;
};

// Validates shape/name agreement, finiteness, non-negativity.
AttributeMatrix make_attribute_matrix(Eigen::MatrixXd values,
                                      std::vector<std::string> attribute_names,
                                      std::vector<std::string> class_names);

// Divides each class column by its L2 norm.  Idempotent.
AttributeMatrix normalize_columns(const AttributeMatrix& raw);

// 1 - a entry-wise; requires normalized input.  Attribute names gain a
// "not_" prefix.  Applying it twice restores the values (not the names).
AttributeMatrix complement(const AttributeMatrix& a);

// Stacks [A; 1-A] vertically.
ExpandedAttributeMatrix expand(const AttributeMatrix& a);

// Shannon entropy in nats of the column after L1 normalization; 0*ln 0 = 0.
double class_entropy(const Eigen::VectorXd& column);

struct EntropyRecord {
  std::string class_name;
  double entropy_original = 0.0;
  double entropy_expanded = 0.0;
};

std::vector<EntropyRecord> entropy_report(const AttributeMatrix& a,
                                          const ExpandedAttributeMatrix& s);

// True when the matrix has the [A; 1-A] shape: even row count and every
// row pair (i, i+M) summing to 1 within tol in each column.
bool looks_expanded(const Eigen::MatrixXd& values, double tol = 1e-9);

// CSV round trip.  Header "attribute,<class_1>,...,<class_C>"; one row per
// attribute.  Strict numeric parsing with row/column coordinates on failure.
AttributeMatrix load_attribute_csv(const std::string& path);
std::string attribute_csv(const Eigen::MatrixXd& values,
                          const std::vector<std::string>& attribute_names,
                          const std::vector<std::string>& class_names);
std::string attribute_csv(const AttributeMatrix& a);
std::string attribute_csv(const ExpandedAttributeMatrix& s);

}  // namespace cazsl::attrspace
