#ifndef HLSVR_ERRORS_HPP
#define HLSVR_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlsvr {

/// Bad argument values: empty data, non-finite entries, invalid counts.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dimension or length mismatch between related arguments.
class ShapeError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Statistically degenerate input (e.g. all paired differences are zero).
class DegenerateInput : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A linear solve failed or was rejected as too ill-conditioned.
class NumericFailure : public std::runtime_error {
public:
    explicit NumericFailure(const std::string& what,
                            double condition_estimate = 0.0)
        : std::runtime_error(what), condition_(condition_estimate) {}

    double condition_estimate() const { return condition_; }

private:
    double condition_;
};

/// Every cell of a hyperparameter grid failed; carries per-cell messages.
class TuningFailure : public std::runtime_error {
public:
    TuningFailure(const std::string& what, std::vector<std::string> cell_errors)
        : std::runtime_error(what), cell_errors_(std::move(cell_errors)) {}

    const std::vector<std::string>& cell_errors() const { return cell_errors_; }

private:
    std::vector<std::string> cell_errors_;
};

/// A response function returned a non-finite value during data generation.
class GenerationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file content; line() is 1-based (0 when not tied to a line).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Structurally valid file whose contents violate dataset integrity
/// (duplicate rows, missing experiments, conflicting counts).
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hlsvr

#endif // HLSVR_ERRORS_HPP
