#pragma once

#include <stdexcept>
#include <string>

namespace najulia {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define NAJULIA_ERROR_TYPE(Name)                                               \
    class Name : public Error {                                                \
    public:                                                                    \
        using Error::Error;                                                    \
    }

NAJULIA_ERROR_TYPE(NonfiniteParameter);
NAJULIA_ERROR_TYPE(ZeroLengthSpec);
NAJULIA_ERROR_TYPE(InvalidParameter);
NAJULIA_ERROR_TYPE(HorizonExceeded);
NAJULIA_ERROR_TYPE(DomainViolation);
NAJULIA_ERROR_TYPE(BranchIndexOutOfRange);
NAJULIA_ERROR_TYPE(BudgetExceeded);
NAJULIA_ERROR_TYPE(MeshTooCoarse);
NAJULIA_ERROR_TYPE(DegenerateInput);
NAJULIA_ERROR_TYPE(IoFailure);
NAJULIA_ERROR_TYPE(ConfigParseError);
NAJULIA_ERROR_TYPE(PreconditionError);

#undef NAJULIA_ERROR_TYPE

} // namespace najulia
