#pragma once

#include <stdexcept>
#include <string>

namespace focklab {

/// A value left the representable envelope (e.g. e^{(Im x)^2/2} overflow).
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// An integral or series that does not converge for the requested parameters.
class DivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace focklab
