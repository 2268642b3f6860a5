#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hybrid/error.hpp"
#include "hybrid/types.hpp"

namespace hybrid::detail {

/// Keeps the best `k` candidates in canonical order (score desc, doc asc).
inline RunList top_k_run(QueryId query, std::string system, std::vector<ScoredDoc> candidates,
                         std::size_t k)
{
    if (k == 0) {
        throw ValidationError("search depth k must be at least 1");
    }
    if (candidates.size() > k) {
        auto middle = candidates.begin() + static_cast<std::ptrdiff_t>(k);
        std::partial_sort(candidates.begin(), middle, candidates.end(), ranks_before);
        candidates.erase(middle, candidates.end());
    } else {
        std::sort(candidates.begin(), candidates.end(), ranks_before);
    }
    return RunList(std::move(query), std::move(system), std::move(candidates));
}

}  // namespace hybrid::detail
