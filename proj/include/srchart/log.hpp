#pragma once

#include <functional>
#include <string_view>

namespace srchart {

using WarningSink = std::function<void(std::string_view)>;

/// Replaces the warning sink (default: "warning: ..." on stderr); returns the
/// previous one. An empty sink silences warnings.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace srchart
