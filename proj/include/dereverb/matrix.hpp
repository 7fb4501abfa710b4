#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dereverb {

// Dense bins x frames matrix. Storage is frame-major (each frame's bins
// are contiguous) because every producer and consumer works frame by frame.
template <typename T>
class FrameMatrix {
 public:
  FrameMatrix() = default;
  FrameMatrix(std::size_t bins, std::size_t frames, T fill = T{})
      : bins_(bins), frames_(frames), data_(bins * frames, fill) {}

  std::size_t bins() const noexcept { return bins_; }
  std::size_t frames() const noexcept { return frames_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t bin, std::size_t frame) {
    return data_[frame * bins_ + bin];
  }
  const T& operator()(std::size_t bin, std::size_t frame) const {
    return data_[frame * bins_ + bin];
  }

  std::span<T> frame(std::size_t f) {
    return {data_.data() + f * bins_, bins_};
  }
  std::span<const T> frame(std::size_t f) const {
    return {data_.data() + f * bins_, bins_};
  }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }

 private:
  std::size_t bins_ = 0;
  std::size_t frames_ = 0;
  std::vector<T> data_;
};

}  // namespace dereverb
