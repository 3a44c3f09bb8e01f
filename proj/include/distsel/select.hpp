#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "distsel/data.hpp"
#include "distsel/mrpp.hpp"

namespace distsel {

enum class StopReason { AllNegative, DeletedSetSignificant, SizeFloor };

struct SelectionIteration {
    std::size_t ell = 0;
    std::vector<std::size_t> active_before;  // S(ell-1)
    std::vector<double> tau_values;          // aligned with active_before
    std::optional<std::size_t> dropped;      // set when a variable was moved
    std::vector<int> signs;                  // length R, -1 or +1 (sign(0) = +1)
    std::vector<std::size_t> ranks;          // length R; deleted vars frozen at R - l~ + 1
    std::optional<double> checkpoint_p;      // MRPP p on deleted + candidate set
};

struct SelectionTrace {
    std::size_t n_variables = 0;  // R
    std::size_t iterations_run = 0;  // L
    StopReason stop_reason = StopReason::AllNegative;
    std::vector<std::size_t> selected;  // S(L), ascending
    std::vector<std::size_t> deleted;   // D(L), ascending
    std::vector<std::size_t> deleted_at;  // iteration each deleted var was moved, 0 if never
    std::vector<double> rank_sums;                // per variable, over l = 1..L
    std::vector<std::size_t> negative_sign_counts;  // #{l : s_{l,r} < 0}
    std::vector<SelectionIteration> iterations;   // full records when requested
};

struct SelectOptions {
    WeightScheme scheme = WeightScheme::NkOverN;
    std::uint64_t seed = 0;
    std::size_t permutations = 1000;  // budget for checkpoint tests
    double alpha = 0.05;
    bool checkpoint = false;
    std::size_t min_active = 2;  // iteration stops once |S| falls below this
    bool record_iterations = true;
    int threads = 1;
};

// Iteratively deletes the variable with the largest (least important) tau,
// recording signs and ranks per iteration. Stops when every tau is negative,
// when the checkpoint MRPP test on the deleted set plus candidate is
// significant, or when the active set falls below the floor.
SelectionTrace backward_select(const LabeledSample& s, const SelectOptions& opt);

// Variables whose importance sign was negative in at least a delta-fraction of
// iterations; delta in (0, 1].
std::vector<std::size_t> important_by_sign(const SelectionTrace& trace, double delta);

// Mean rank per variable over the trace; lower means more important.
std::vector<double> average_ranks(const SelectionTrace& trace);

namespace detail {

// Column-major copy of the data for contiguous per-variable access in the
// selection hot loop.
struct ColumnData {
    std::size_t n = 0;
    std::size_t r = 0;
    std::vector<double> cols;  // r blocks of n values

    static ColumnData from_matrix(const Matrix& m);
    const double* col(std::size_t j) const { return cols.data() + j * n; }
};

// Pairwise squared distances over all r variables; shared across permutation
// reruns in the modified test.
std::vector<double> full_sqdist(const ColumnData& cols);

struct CoreResult {
    std::size_t iterations_run = 0;
    StopReason stop_reason = StopReason::AllNegative;
    std::vector<char> selected_mask;
    std::vector<std::size_t> deleted_at;
    std::vector<double> rank_sums;
    std::vector<std::size_t> negative_sign_counts;
};

// The selection loop itself. base_sq, when given, must equal
// full_sqdist(cols) and is copied instead of recomputed. record collects full
// per-iteration records when non-null.
CoreResult backward_select_core(const ColumnData& cols, std::span<const int> labels,
                                const GroupWeights& w, const SelectOptions& opt,
                                const std::vector<double>* base_sq,
                                std::vector<SelectionIteration>* record);

}  // namespace detail

}  // namespace distsel
