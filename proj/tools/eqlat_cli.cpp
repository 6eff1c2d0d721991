#include <eqlat/eqlat.hpp>
int main() { return 0; }
