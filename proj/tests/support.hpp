#pragma once

#include <gtest/gtest.h>

#include "omlad/error.hpp"

// Expects `stmt` to throw omlad::Error carrying `expected_code`.
#define EXPECT_OMLAD_ERROR(stmt, expected_code)                                  \
  do {                                                                           \
    try {                                                                        \
      stmt;                                                                      \
      ADD_FAILURE() << "expected " << omlad::to_string(expected_code);           \
    } catch (const omlad::Error& e) {                                            \
      EXPECT_EQ(e.code(), expected_code) << e.what();                            \
    }                                                                            \
  } while (0)
