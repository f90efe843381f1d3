#pragma once

#include "dpmlc/codegen.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dpmlc {

/// Parsed forms of the two program-text languages (see docs/FORMATS.md).
/// Execution works purely from the text: the interpreter stands in for the
/// cycle-accurate backend simulators.

struct CgraProgram {
    struct Layer {
        int in = 0, out = 0;
        long chunks = 0;
        int lanes = 0;
        std::string act;  // relu | tanh | none
        std::vector<std::int64_t> weights;  // out x in, row-major, scaled
        std::vector<std::int64_t> biases;
    };
    FixedFormat format;
    int input_width = 0;
    int output_width = 0;
    std::vector<Layer> layers;
};

struct MatProgram {
    struct Match {
        int feature = 0;
        std::int64_t lo = 0, hi = 0;  // inclusive, scaled
    };
    struct Bucket {
        std::int64_t lo = 0, hi = 0;
        std::int64_t score = 0;
    };
    struct Table {
        int action = -1;                // kmeans: cluster id
        int feature = -1;               // svm: feature index
        std::vector<Match> matches;     // kmeans: all must hold
        std::vector<Bucket> buckets;    // svm: first containing bucket scores
    };
    enum class Kind { kmeans, svm } kind = Kind::kmeans;
    FixedFormat format;
    int input_width = 0;
    std::vector<Table> tables;
    int default_action = 0;          // kmeans
    std::int64_t bias = 0;           // svm
    int pos_class = 1, neg_class = 0;
};

using ParsedProgram = std::variant<CgraProgram, MatProgram>;

/// Throws std::runtime_error on malformed text.
ParsedProgram parse_program(const std::string& text);

/// Deterministic evaluation: saturating fixed-point arithmetic for cgra
/// programs, first-match table semantics for MAT programs. Returns the
/// class/cluster id.
int interpret(const ParsedProgram& program, std::span<const double> row);
int interpret(const GeneratedArtifact& artifact, std::span<const double> row);

/// The raw decision values: final-layer outputs (cgra), the summed score and
/// bias (svm), or the chosen cluster id (kmeans), dequantized.
std::vector<double> interpret_outputs(const ParsedProgram& program, std::span<const double> row);
std::vector<double> interpret_outputs(const GeneratedArtifact& artifact,
                                      std::span<const double> row);

}  // namespace dpmlc
