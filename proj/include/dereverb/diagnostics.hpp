#pragma once

#include <functional>
#include <string_view>

namespace dereverb {

using WarningHandler = std::function<void(std::string_view)>;

// Installs the sink for non-fatal warnings and returns the previous one.
// The default handler prints "warning: <msg>" to stderr. Passing an empty
// function restores the default.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

// Collects warnings for the lifetime of the object (tests, bindings).
class ScopedWarningCapture {
 public:
  explicit ScopedWarningCapture(std::function<void(std::string_view)> sink);
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

 private:
  WarningHandler previous_;
};

}  // namespace dereverb
