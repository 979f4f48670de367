# Semantics toolkit package
