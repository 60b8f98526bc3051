// Umbrella header.
#pragma once

#include "citeconc/cli.hpp"
#include "citeconc/concentration.hpp"
#include "citeconc/config.hpp"
#include "citeconc/corpus.hpp"
#include "citeconc/corpus_io.hpp"
#include "citeconc/normalize.hpp"
#include "citeconc/report.hpp"
#include "citeconc/studies.hpp"
#include "citeconc/synthgen.hpp"
#include "citeconc/windows.hpp"
