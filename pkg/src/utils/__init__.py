# Input parsing and text tables
