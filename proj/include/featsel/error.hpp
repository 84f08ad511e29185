#pragma once

#include <stdexcept>
#include <string>

namespace featsel {

/// Input data is unusable: unreadable file, malformed cell, too few samples
/// or classes. Invalid parameters raise std::invalid_argument instead.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace featsel
