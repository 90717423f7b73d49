#pragma once

#include <stdexcept>
#include <string>

namespace betalab {

/** Base class for all library errors. */
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotPisotError : Error {
    explicit NotPisotError(const std::string& msg) : Error(msg) {}
};
struct NoDominantRealRootError : Error {
    explicit NoDominantRealRootError(const std::string& msg) : Error(msg) {}
};
struct DegreeTooLowError : Error {
    explicit DegreeTooLowError(const std::string& msg) : Error(msg) {}
};
struct MixedParentsError : Error {
    explicit MixedParentsError(const std::string& msg) : Error(msg) {}
};
struct NotIntegralError : Error {
    explicit NotIntegralError(const std::string& msg) : Error(msg) {}
};
struct WrongDegreeError : Error {
    explicit WrongDegreeError(const std::string& msg) : Error(msg) {}
};
struct OutOfDomainError : Error {
    explicit OutOfDomainError(const std::string& msg) : Error(msg) {}
};
struct NegativeInputError : Error {
    explicit NegativeInputError(const std::string& msg) : Error(msg) {}
};
struct InfiniteExpansionOfOneError : Error {
    explicit InfiniteExpansionOfOneError(const std::string& msg) : Error(msg) {}
};
struct PositionOutOfRangeError : Error {
    explicit PositionOutOfRangeError(const std::string& msg) : Error(msg) {}
};
struct RangeError : Error {
    explicit RangeError(const std::string& msg) : Error(msg) {}
};
struct NotInUError : Error {
    explicit NotInUError(const std::string& msg) : Error(msg) {}
};
struct NotInUStarError : Error {
    explicit NotInUStarError(const std::string& msg) : Error(msg) {}
};
struct NotRelatedError : Error {
    explicit NotRelatedError(const std::string& msg) : Error(msg) {}
};
struct PreconditionUnmetError : Error {
    explicit PreconditionUnmetError(const std::string& msg) : Error(msg) {}
};
struct ConstraintViolationError : Error {
    explicit ConstraintViolationError(const std::string& msg) : Error(msg) {}
};
struct ComplexEmbeddingUncertifiedError : Error {
    explicit ComplexEmbeddingUncertifiedError(const std::string& msg) : Error(msg) {}
};
struct NoForbiddenWordError : Error {
    explicit NoForbiddenWordError(const std::string& msg) : Error(msg) {}
};

}  // namespace betalab
