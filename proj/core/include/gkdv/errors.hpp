#pragma once

#include <stdexcept>
#include <string>

namespace gkdv {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define GKDV_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& msg) : Error(msg) {}    \
    }

GKDV_DEFINE_ERROR(TailTruncation);
GKDV_DEFINE_ERROR(GridMismatch);
GKDV_DEFINE_ERROR(NotOrthogonal);
GKDV_DEFINE_ERROR(SolveFailure);
GKDV_DEFINE_ERROR(StructureViolation);
GKDV_DEFINE_ERROR(Degenerate);
GKDV_DEFINE_ERROR(UnsupportedOrder);
GKDV_DEFINE_ERROR(UnsupportedExponent);
GKDV_DEFINE_ERROR(WrongExponent);
GKDV_DEFINE_ERROR(BlowupDetected);
GKDV_DEFINE_ERROR(DomainTooSmall);
GKDV_DEFINE_ERROR(TrackingLost);

#undef GKDV_DEFINE_ERROR

} // namespace gkdv
