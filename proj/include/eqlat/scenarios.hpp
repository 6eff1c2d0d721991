#pragma once

#include "bounds.hpp"
#include "io.hpp"
