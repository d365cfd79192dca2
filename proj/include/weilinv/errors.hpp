#ifndef WEILINV_ERRORS_HPP
#define WEILINV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace weilinv {

/// Base class of all engine errors. `code()` is a stable machine-parsable
/// name, `what()` carries the human text.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct RingMismatch : Error {
    explicit RingMismatch(const std::string& msg) : Error("RingMismatch", msg) {}
};

struct NotInvertible : Error {
    explicit NotInvertible(const std::string& msg) : Error("NotInvertible", msg) {}
};

struct UnknownVariable : Error {
    explicit UnknownVariable(const std::string& msg) : Error("UnknownVariable", msg) {}
};

struct SpecMismatch : Error {
    explicit SpecMismatch(const std::string& msg) : Error("SpecMismatch", msg) {}
};

struct NotAUnit : Error {
    explicit NotAUnit(const std::string& msg) : Error("NotAUnit", msg) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& msg) : Error("DivisionByZero", msg) {}
};

struct NotMonomialTimesUnit : Error {
    explicit NotMonomialTimesUnit(const std::string& msg) : Error("NotMonomialTimesUnit", msg) {}
};

struct NotDivisible : Error {
    explicit NotDivisible(const std::string& msg) : Error("NotDivisible", msg) {}
};

struct UnboundVariable : Error {
    explicit UnboundVariable(const std::string& msg) : Error("UnboundVariable", msg) {}
};

struct UnsupportedOperation : Error {
    explicit UnsupportedOperation(const std::string& msg) : Error("UnsupportedOperation", msg) {}
};

struct BasePointSingular : Error {
    explicit BasePointSingular(const std::string& msg) : Error("BasePointSingular", msg) {}
};

struct SamplerExhausted : Error {
    explicit SamplerExhausted(const std::string& msg) : Error("SamplerExhausted", msg) {}
};

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& msg)
        : Error("ParseError",
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace weilinv

#endif
