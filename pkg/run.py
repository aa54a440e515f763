"""
run.py
Точка входа приложения. Запускает командную строку (click); команда `serve` поднимает Flask-приложение,
созданное функцией `create_app` из модуля `application.app`.

Примеры:
    python run.py generate --family two-branch --kappa 1 --theta 2 --out tree.json
    python run.py check tree.json --json
    python run.py serve --port 5000
"""

from application.cli import main


if __name__ == "__main__":
    main()
