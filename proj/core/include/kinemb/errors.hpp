#pragma once

#include <stdexcept>
#include <string>

namespace kinemb {

/// Malformed input data (bad line, bad header, inconsistent record).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
          source_(std::move(source)),
          line_(line) {}

    explicit ParseError(const std::string& what) : std::runtime_error(what), line_(0) {}

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

private:
    std::string source_;
    std::size_t line_ = 0;
};

/// An input file that could not be opened at all.
class MissingInputError : public std::runtime_error {
public:
    explicit MissingInputError(const std::string& path)
        : std::runtime_error("cannot open input: " + path) {}
};

/// Numeric breakdown inside a pipeline stage (NaN loss, non-finite value).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wraps a stage failure with the name of the pipeline stage that raised it.
class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& what)
        : std::runtime_error("[" + stage + "] " + what), stage_(stage) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace kinemb
