// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
int main(){ printf("placeholder\n"); return 1; }
