"""Truth-table files and report rendering."""
