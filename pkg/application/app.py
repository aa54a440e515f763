"""
app.py
Основной файл приложения для настройки Flask-приложения. Этот файл отвечает за создание экземпляра Flask,
подключение маршрутов и обработку ошибок входных данных.
"""

from flask import Flask, jsonify

from application.routes.check_routes import check_bp
from application.routes.family_routes import family_bp
from utils.errors import TreeShiftError
from utils.logs.logger import logger


def create_app():
    """
    Создает и настраивает экземпляр Flask-приложения.
    """
    app = Flask(__name__)
    app.json.sort_keys = True
    app.json.ensure_ascii = False

    # Регистрируем blueprints
    app.register_blueprint(check_bp)
    app.register_blueprint(family_bp)

    @app.errorhandler(TreeShiftError)
    def domain_error(e):
        """
        Ошибки входных данных предметной области возвращаются как JSON с кодом 400.
        """
        logger.log(f"Некорректный запрос: {e}", "WARNING")
        return jsonify(error=type(e).__name__, description=str(e)), 400

    @app.errorhandler(400)
    def bad_request(e):
        return jsonify(error="Bad request", description=str(e)), 400

    return app
