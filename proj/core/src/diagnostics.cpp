#include "molspin/diagnostics.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace molspin {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& sink() {
  static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> n{0};
  return n;
}

}  // namespace

void set_max_threads(int n) { thread_setting() = std::max(0, n); }

int max_threads() {
  const int n = thread_setting();
  if (n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(sink_mutex());
  WarningHandler prev = std::move(sink());
  sink() = std::move(handler);
  return prev;
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) sink()(message);
}

WarningCapture::WarningCapture() {
  previous_ = set_warning_handler([this](std::string_view msg) { messages_.emplace_back(msg); });
}

WarningCapture::~WarningCapture() { set_warning_handler(std::move(previous_)); }

}  // namespace molspin
