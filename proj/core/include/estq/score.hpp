#pragma once

#include <compare>

namespace estq {

// Priority score with an explicit top element. The top element compares
// greater than every finite score; it is not a floating-point infinity so
// comparisons stay total and portable.
class Score {
public:
    constexpr Score() = default;

    static constexpr Score finite(double v) { return Score(v, false); }
    static constexpr Score top() { return Score(0.0, true); }

    constexpr bool is_top() const { return top_; }
    constexpr double value() const { return value_; }  // meaningful only when !is_top()

    friend constexpr bool operator==(const Score& a, const Score& b) {
        if (a.top_ || b.top_) return a.top_ == b.top_;
        return a.value_ == b.value_;
    }
    friend constexpr std::partial_ordering operator<=>(const Score& a, const Score& b) {
        if (a.top_ && b.top_) return std::partial_ordering::equivalent;
        if (a.top_) return std::partial_ordering::greater;
        if (b.top_) return std::partial_ordering::less;
        return a.value_ <=> b.value_;
    }

private:
    constexpr Score(double v, bool top) : value_(v), top_(top) {}
    double value_ = 0.0;
    bool top_ = false;
};

}  // namespace estq
