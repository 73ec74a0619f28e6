#include <doctest.h>

TEST_SUITE_BEGIN("postproc");
TEST_SUITE_END();
