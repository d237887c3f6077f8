#pragma once

#include <stdexcept>
#include <string>

namespace cpfsvd {

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    singular_matrix,
    not_definite,
    solver_failure,
    inconsistent_structure,
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what)
{
    if (!condition)
        throw Error(code, what);
}

} // namespace cpfsvd
