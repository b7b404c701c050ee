#pragma once

#include <functional>
#include <string>

namespace qrm {

using WarningSink = std::function<void(const std::string&)>;

// Installs a process-wide sink for non-fatal warnings and returns the previous one.
// The default sink writes to stderr. Thread-safe.
WarningSink set_warning_sink(WarningSink sink);

void warn(const std::string& message);

}  // namespace qrm
