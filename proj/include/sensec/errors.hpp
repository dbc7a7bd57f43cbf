#pragma once

#include <stdexcept>
#include <string>

namespace sensec {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroInverse : Error {
    ZeroInverse() : Error("field inverse of zero") {}
};

struct EmptyPolynomial : Error {
    EmptyPolynomial() : Error("polynomial has no coefficients") {}
};

struct InvalidId : Error {
    explicit InvalidId(unsigned long id)
        : Error("node id " + std::to_string(id) + " outside (0, 2^16)") {}
};

struct DuplicateId : Error {
    explicit DuplicateId(unsigned long id)
        : Error("node id " + std::to_string(id) + " already provisioned") {}
};

struct DegreeOutOfRange : Error {
    explicit DegreeOutOfRange(long t)
        : Error("security degree " + std::to_string(t) + " outside [1, 1000]") {}
};

struct SelfPairing : Error {
    SelfPairing() : Error("pairwise secret with own id") {}
};

struct InsufficientShares : Error {
    InsufficientShares(std::size_t have, std::size_t need)
        : Error("need " + std::to_string(need) + " shares to reconstruct, have " +
                std::to_string(have)) {}
};

struct InconsistentShares : Error {
    InconsistentShares() : Error("interpolated coefficient matrix is not symmetric") {}
};

struct CounterExhausted : Error {
    CounterExhausted() : Error("message counter exhausted; key rollover required") {}
};

struct ConfigInvalid : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace sensec
