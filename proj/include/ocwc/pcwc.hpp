#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ocwc/dataset.hpp"
#include "ocwc/obool/word.hpp"

namespace ocwc::pcwc {

using obool::Backend;
using obool::Bit;
using obool::Word;

/// Encrypted padded table, column-major. Rows are in physical order; every
/// column has n_pad entries.
struct EncryptedDatasetState {
  std::vector<std::vector<Bit>> features;  // k columns
  std::vector<Bit> classes;
  std::vector<Bit> validity;

  std::size_t k() const noexcept { return features.size(); }
  std::size_t n_pad() const noexcept { return classes.size(); }
  unsigned index_width() const { return ceil_log2(n_pad()); }

  /// Throws UsageError on inconsistent column lengths or non-power-of-two
  /// row count.
  void validate() const;
};

EncryptedDatasetState encrypt_dataset(Backend& be, const PaddedDataset& ds);

/// keep[j] decrypts to 1 iff feature j is retained.
struct SelectionMaskCipher {
  std::vector<Bit> keep;
};

std::vector<std::uint8_t> decrypt_mask(Backend& be, const SelectionMaskCipher& mask);

/// Prefix labels L[0..k] for rows sorted by (validity, f_1, ..., f_k).
/// L[t][0] = 0 and L[t][i] = L[t][i-1] + NOT x_i, where x_i says rows i-1 and
/// i agree on validity and on the first t columns. Validity acts as a leading
/// pseudo-feature so dummy rows form their own groups; without padding L[0]
/// is all zero.
std::vector<std::vector<Word>> compute_prefix_labels(
    Backend& be, std::span<const Bit> validity,
    std::span<const std::vector<Bit>> columns, unsigned width);

/// Keep-bit for the feature under test: OR over adjacent pairs of
/// valid(i-1) * valid(i) * [groups equal] * (class(i-1) ^ class(i)).
/// Rows with equal (group_a, group_b) must already be adjacent.
Bit consistency_bit(Backend& be, std::span<const Word> group_a,
                    std::span<const Word> group_b, std::span<const Bit> classes,
                    std::span<const Bit> validity);

/// Re-sorts the whole table once per feature, t = k..1.
SelectionMaskCipher naive_select(Backend& be, const EncryptedDatasetState& enc);

/// Label state of the improved algorithm; prefix[t] is in the order of the
/// initial full sort, the other arrays in the current suffix order.
struct LabelState {
  std::vector<std::vector<Word>> prefix;
  std::vector<Word> post_labels;
  std::vector<Word> map;
  std::vector<Word> map_inverse;
};

/// Test hooks. Row tags are CONST words holding each record's original row
/// index; they ride along every sort so alignment can be audited.
struct ImprovedProbe {
  bool carry_row_tags = false;

  struct Phase1View {
    const LabelState& labels;
    const std::vector<Word>& prefix_tags;
    const std::vector<std::vector<Bit>>& prefix_features;
  };
  struct IterationView {
    std::size_t feature;  // 0-based index of the feature under test
    const LabelState& labels;
    const std::vector<Word>& suffix_tags;
    const std::vector<Word>& aligned_prefix_tags;
  };

  std::function<void(const Phase1View&)> after_phase1;
  std::function<void(const IterationView&)> after_alignment;
};

/// One full sort, then per feature only suffix-side, inverse and alignment
/// sorts over O(log n)-bit keys.
SelectionMaskCipher improved_select(Backend& be, const EncryptedDatasetState& enc,
                                    const ImprovedProbe* probe = nullptr);

}  // namespace ocwc::pcwc
