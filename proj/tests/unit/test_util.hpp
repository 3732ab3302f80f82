#pragma once

#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "idt/error.hpp"

namespace idt::testing {

template <class F>
::testing::AssertionResult raises(ErrorKind kind, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.kind() == kind) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "raised " << to_string(e.kind()) << ": " << e.what();
  } catch (const std::exception& e) {
    return ::testing::AssertionFailure() << "raised a foreign exception: " << e.what();
  }
  return ::testing::AssertionFailure() << "nothing raised, expected " << to_string(kind);
}

// Fresh scratch directory under the build tree, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("idt_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace idt::testing
