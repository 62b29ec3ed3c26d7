#pragma once

#include <filesystem>

namespace glucoge::test {

inline std::filesystem::path data_dir() { return GLUCOGE_TEST_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return GLUCOGE_TEST_FIXTURE_DIR; }
inline std::filesystem::path joy_wilson_path() { return data_dir() / "joy_wilson.csv"; }

/// The best Joy Wilson model (G11 + MAD) in G11 phenotype notation.
inline constexpr const char* kJoyWilsonBestModel =
    "GL[k_00] + CH[k_01] - cos(IL[k_01]) + tan(exp(IL[k_01] + cos(tan(exp(exp(cos(K)))))))";

/// Choice indices of the leftmost derivation of kJoyWilsonBestModel under
/// G11, worked out by hand from the grammar listing. Each index is below
/// its rule's choice count, so it can be used directly as a codon.
inline constexpr int kJoyWilsonChoices[] = {
    0,           // func
    2, 0,        // exprgluc -> <gluc> -> GL[k_00]
    2, 1,        // exprch -> <varch> -> CH[k_01]
    0,           // exprins -> <exprins> <op> <exprins>
    1, 1, 2, 3,  //   cos( varins IL[k_01] )
    0,           //   +
    1, 2,        //   tan(
    1, 3,        //     exp(
    0,           //       <exprins> <op> <exprins>
    2, 3,        //       IL[k_01]
    0,           //       +
    1, 1,        //       cos(
    1, 2,        //         tan(
    1, 3,        //           exp(
    1, 3,        //             exp(
    1, 1,        //               cos(
    2, 4,        //                 K
};

}  // namespace glucoge::test
