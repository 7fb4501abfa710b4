#include "dereverb/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace dereverb {
namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler_slot() {
  static WarningHandler h;
  return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(handler_mutex());
  return std::exchange(handler_slot(), std::move(handler));
}

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex());
  if (handler_slot()) {
    handler_slot()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

ScopedWarningCapture::ScopedWarningCapture(
    std::function<void(std::string_view)> sink)
    : previous_(set_warning_handler(std::move(sink))) {}

ScopedWarningCapture::~ScopedWarningCapture() {
  set_warning_handler(std::move(previous_));
}

}  // namespace dereverb
