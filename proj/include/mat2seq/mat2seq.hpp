#pragma once

#include "mat2seq/canonicalize.hpp"
#include "mat2seq/cif_io.hpp"
#include "mat2seq/codec.hpp"
#include "mat2seq/core.hpp"
#include "mat2seq/corpus.hpp"
#include "mat2seq/lattice_reduce.hpp"
#include "mat2seq/symmetry.hpp"
#include "mat2seq/verify.hpp"
