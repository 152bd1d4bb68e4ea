"""Command orchestration, configuration and reporting for the polar OAI toolkit."""

__all__: list[str] = []
