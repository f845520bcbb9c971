#pragma once

#include <stdexcept>
#include <string>

namespace mslie {

enum class ErrorCode {
    Dimension,
    Degree,
    Variance,
    Chart,
    NotClosed,
    FrameDegenerate,
    NotHamiltonian,
    NotBasic,
    NotProjectable,
    Incompatible,
    Insufficient,
    Underdetermined,
    DomainExit,
    UnknownEntity,
    InvalidArgument,
    Numerical,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mslie
