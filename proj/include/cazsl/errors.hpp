#pragma once

#include <stdexcept>
#include <string>

namespace cazsl {

// Base of all toolkit errors.  exit_code() feeds the CLI process status:
// usage problems exit 1, bad input data exits 2, numerical failures exit 3.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual int exit_code() const { return 2; }
};

class UsageError : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 1; }
};

class DataError : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

class NumericError : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

// ----- input parsing -----

class ParseError : public DataError {
public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : DataError(file + ":" + std::to_string(line) + ": " + what),
        file_(file), line_(line) {}
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

private:
  std::string file_;
  std::size_t line_;
};

// ----- attribute space -----

class EmptyMatrix : public DataError {
public:
  using DataError::DataError;
};

class AllZeroColumn : public DataError {
public:
  explicit AllZeroColumn(const std::string& class_name)
      : DataError("attribute column for class '" + class_name +
                  "' is all zeros and cannot be normalized"),
        class_name_(class_name) {}
  const std::string& class_name() const { return class_name_; }

private:
  std::string class_name_;
};

class NotNormalized : public DataError {
public:
  using DataError::DataError;
};

class AllZero : public DataError {
public:
  using DataError::DataError;
};

class ClassMismatch : public DataError {
public:
  using DataError::DataError;
};

// ----- datasets and splits -----

class UnknownClass : public DataError {
public:
  explicit UnknownClass(const std::string& class_name)
      : DataError("unknown class '" + class_name + "'"), class_name_(class_name) {}
  const std::string& class_name() const { return class_name_; }

private:
  std::string class_name_;
};

class DuplicateSampleId : public DataError {
public:
  explicit DuplicateSampleId(const std::string& sample_id)
      : DataError("duplicate sample id '" + sample_id + "'") {}
};

class SplitOverlap : public DataError {
public:
  using DataError::DataError;
};

class InfeasibleConfig : public DataError {
public:
  using DataError::DataError;
};

// ----- training and prediction -----

class NoTrainingData : public DataError {
public:
  using DataError::DataError;
};

class DimensionMismatch : public DataError {
public:
  using DataError::DataError;
};

class EmptyCandidates : public DataError {
public:
  using DataError::DataError;
};

class UnknownAttribute : public DataError {
public:
  explicit UnknownAttribute(const std::string& name)
      : DataError("attribute '" + name + "' not present in signature matrix") {}
};

class AlreadyExpanded : public DataError {
public:
  using DataError::DataError;
};

// ----- rank aggregation -----

class DuplicateCandidate : public DataError {
public:
  explicit DuplicateCandidate(const std::string& class_name)
      : DataError("candidate class '" + class_name + "' listed twice") {}
};

class NonPositiveSigma : public DataError {
public:
  using DataError::DataError;
};

class AllZeroWeights : public DataError {
public:
  using DataError::DataError;
};

class NonFiniteWeight : public NumericError {
public:
  using NumericError::NumericError;
};

// ----- bound calculator -----

class EmptyCdf : public DataError {
public:
  using DataError::DataError;
};

class ZeroTolerance : public NumericError {
public:
  using NumericError::NumericError;
};

// ----- evaluation -----

class MissingPrediction : public DataError {
public:
  explicit MissingPrediction(const std::string& sample_id)
      : DataError("no prediction for sample '" + sample_id + "'") {}
};

class CoverageMismatch : public DataError {
public:
  using DataError::DataError;
};

class EmptyPool : public DataError {
public:
  using DataError::DataError;
};

class TooFewCandidates : public DataError {
public:
  using DataError::DataError;
};

}  // namespace cazsl
