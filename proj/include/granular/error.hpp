#pragma once

#include <stdexcept>
#include <string>

namespace granular {

enum class ErrorCode {
    missing_cell,
    unknown_category,
    schema_mismatch,
    bad_split,
    empty_data,
    dimension_mismatch,
    unknown_attribute,
    non_categorical_value,
    too_many_attributes,
    empty_reduct,
    missing_attribute_value,
    empty_cluster_set,
    singular_system,
    length_mismatch,
    index_out_of_range,
    insufficient_data,
    invalid_argument,
    io_error,
    parse_error,
    replay_mismatch,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI diagnostic line) can dispatch on the kind.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace granular
