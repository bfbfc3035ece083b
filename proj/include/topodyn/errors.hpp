#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace topodyn {

enum class errc {
  non_square,
  empty_row_or_column,
  alphabet_mismatch,
  not_admissible,
  not_mixing,
  gap_too_small,
  not_chain_transitive,
  witness_inequality_violated,
  chain_step_violated,
  not_unimodular,
  eigenvalue_on_unit_circle,
  lift_ambiguous,
  relation_oracle_unavailable,
  not_shadowing_capable,
  chain_not_found,
  invalid_spec,
  parse_error,
  unknown_kind,
  param_out_of_range,
  io_error,
  invalid_argument,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::non_square: return "NonSquare";
    case errc::empty_row_or_column: return "EmptyRowOrColumn";
    case errc::alphabet_mismatch: return "AlphabetMismatch";
    case errc::not_admissible: return "NotAdmissible";
    case errc::not_mixing: return "NotMixing";
    case errc::gap_too_small: return "GapTooSmall";
    case errc::not_chain_transitive: return "NotChainTransitive";
    case errc::witness_inequality_violated: return "WitnessInequalityViolated";
    case errc::chain_step_violated: return "ChainStepViolated";
    case errc::not_unimodular: return "NotUnimodular";
    case errc::eigenvalue_on_unit_circle: return "EigenvalueOnUnitCircle";
    case errc::lift_ambiguous: return "LiftAmbiguous";
    case errc::relation_oracle_unavailable: return "RelationOracleUnavailable";
    case errc::not_shadowing_capable: return "NotShadowingCapable";
    case errc::chain_not_found: return "ChainNotFound";
    case errc::invalid_spec: return "InvalidSpec";
    case errc::parse_error: return "ParseError";
    case errc::unknown_kind: return "UnknownKind";
    case errc::param_out_of_range: return "ParamOutOfRange";
    case errc::io_error: return "IoError";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

// Single exception type; `code()` identifies the failure, `index()` carries the
// offending row / step / hypothesis where the operation defines one.
class error : public std::runtime_error {
 public:
  error(errc code, std::string what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), index_(index) {}

  errc code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  errc code_;
  std::optional<std::size_t> index_;
};

}  // namespace topodyn
