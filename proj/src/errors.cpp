// Copyright 2026 PermSync Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "permsync/errors.hpp"

namespace permsync {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotSquare: return "NotSquare";
        case ErrorCode::NotBinary: return "NotBinary";
        case ErrorCode::NotDoublyStochasticBinary: return "NotDoublyStochasticBinary";
        case ErrorCode::SizeMismatch: return "SizeMismatch";
        case ErrorCode::AsymmetricLabels: return "AsymmetricLabels";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::AlreadyGauged: return "AlreadyGauged";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::MissingLayout: return "MissingLayout";
        case ErrorCode::TooManyVariables: return "TooManyVariables";
        case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::InvalidEstimate: return "InvalidEstimate";
        case ErrorCode::EmptySampleSet: return "EmptySampleSet";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace permsync
