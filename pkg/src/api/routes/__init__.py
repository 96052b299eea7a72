"""API routes: health, environments/oracle, evaluation."""
