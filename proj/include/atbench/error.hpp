#ifndef ATBENCH_ERROR_HPP
#define ATBENCH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace atbench {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Problems with input data: malformed caches, inconsistent measurements,
/// degenerate search spaces. The CLI maps these to exit status 2.
class DataError : public Error {
public:
  using Error::Error;
};

/// Contract violations by the caller (bad arguments, unknown names).
/// The CLI maps these to exit status 64.
class UsageError : public Error {
public:
  using Error::Error;
};

#define ATBENCH_DEFINE_ERROR(Name, Base)                                       \
  class Name : public Base {                                                   \
  public:                                                                      \
    using Base::Base;                                                          \
  };

// constraint language
ATBENCH_DEFINE_ERROR(SyntaxError, DataError)
ATBENCH_DEFINE_ERROR(UnknownParameter, DataError)
ATBENCH_DEFINE_ERROR(TypeError, DataError)

// search spaces
ATBENCH_DEFINE_ERROR(EmptySpace, DataError)
ATBENCH_DEFINE_ERROR(LengthMismatch, UsageError)

// caches
ATBENCH_DEFINE_ERROR(FormatError, DataError)
ATBENCH_DEFINE_ERROR(SchemaVersionMismatch, DataError)
ATBENCH_DEFINE_ERROR(DuplicateEntry, DataError)
ATBENCH_DEFINE_ERROR(MissingEntry, DataError)
ATBENCH_DEFINE_ERROR(ConstraintMismatch, DataError)
ATBENCH_DEFINE_ERROR(TooLarge, UsageError)

// evaluation
ATBENCH_DEFINE_ERROR(InvalidConfiguration, UsageError)
ATBENCH_DEFINE_ERROR(UnknownConfiguration, DataError)
ATBENCH_DEFINE_ERROR(UnknownAlgorithm, UsageError)
ATBENCH_DEFINE_ERROR(UnknownHyperparameter, UsageError)

// methodology
ATBENCH_DEFINE_ERROR(OutOfRange, UsageError)
ATBENCH_DEFINE_ERROR(DegenerateSpace, DataError)
ATBENCH_DEFINE_ERROR(DegenerateDenominator, DataError)
ATBENCH_DEFINE_ERROR(GridMismatch, UsageError)

#undef ATBENCH_DEFINE_ERROR

} // namespace atbench

#endif // ATBENCH_ERROR_HPP
