#include "granular/error.hpp"

namespace granular {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::missing_cell: return "MissingCell";
    case ErrorCode::unknown_category: return "UnknownCategory";
    case ErrorCode::schema_mismatch: return "SchemaMismatch";
    case ErrorCode::bad_split: return "BadSplit";
    case ErrorCode::empty_data: return "EmptyData";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::unknown_attribute: return "UnknownAttribute";
    case ErrorCode::non_categorical_value: return "NonCategoricalValue";
    case ErrorCode::too_many_attributes: return "TooManyAttributes";
    case ErrorCode::empty_reduct: return "EmptyReduct";
    case ErrorCode::missing_attribute_value: return "MissingAttributeValue";
    case ErrorCode::empty_cluster_set: return "EmptyClusterSet";
    case ErrorCode::singular_system: return "SingularSystem";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::replay_mismatch: return "ReplayMismatch";
    }
    return "Unknown";
}

}  // namespace granular
