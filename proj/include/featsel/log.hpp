#pragma once

#include <functional>
#include <string>

namespace featsel {

using WarningSink = std::function<void(const std::string&)>;

/// Installs a handler for library warnings (default writes to stderr).
/// Returns the previous handler.
WarningSink set_warning_sink(WarningSink sink);

void warn(const std::string& message);

} // namespace featsel
