#pragma once

#include <stdexcept>
#include <string>

namespace drs {

enum class Errc {
  malformed_clause = 1,
  unknown_variable_kind,
  parse_error,
  ill_formed_input,
  length_mismatch,
  oracle_limit_exceeded,
  overlap_error,
  alignment_mismatch,
  empty_input,
  empty_token,
  empty_corpus,
  missing_sense_table,
  missing_embedding,
  dimension_mismatch,
  invalid_config,
  non_finite_loss,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, std::string message) {
  throw Error(code, std::move(message));
}

}  // namespace drs
