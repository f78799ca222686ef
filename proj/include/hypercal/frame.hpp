#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hypercal/errors.hpp"

namespace hypercal {

// 2^16 basis monomials is the supported envelope; index masks are uint32_t.
inline constexpr int kMaxDim = 16;

// A fixed ordered coframe. Forms and polyvectors hold a shared pointer to
// their frame and refuse to combine across distinct frames.
struct Frame {
    int dim = 0;
    std::vector<std::string> names;

    friend bool operator==(const Frame& a, const Frame& b) {
        return a.dim == b.dim && a.names == b.names;
    }
};

using FramePtr = std::shared_ptr<const Frame>;

inline FramePtr make_frame(int dim, std::vector<std::string> names = {}) {
    if (dim < 1 || dim > kMaxDim)
        throw DomainError("frame dimension must be in [1," + std::to_string(kMaxDim) + "]");
    if (names.empty()) {
        names.reserve(dim);
        for (int i = 0; i < dim; ++i) names.push_back("e" + std::to_string(i + 1));
    }
    if (static_cast<int>(names.size()) != dim)
        throw DomainError("frame has " + std::to_string(names.size()) + " labels for dim " +
                          std::to_string(dim));
    std::set<std::string> uniq(names.begin(), names.end());
    if (static_cast<int>(uniq.size()) != dim) throw DomainError("frame labels must be unique");
    return std::make_shared<Frame>(Frame{dim, std::move(names)});
}

inline bool same_frame(const FramePtr& a, const FramePtr& b) {
    return a == b || (a && b && *a == *b);
}

inline void require_same_frame(const FramePtr& a, const FramePtr& b, const char* op) {
    if (!same_frame(a, b)) throw DomainError(std::string(op) + ": frame mismatch");
}

} // namespace hypercal
