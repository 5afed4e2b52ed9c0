import sqlite3
import pandas as pd
from typing import List, Dict, Optional
import json
from datetime import datetime
import logging
import os


class DatabaseManager:
    def __init__(self, db_path: str = None):
        self.logger = logging.getLogger(__name__)
        if db_path is None:
            db_path = os.environ.get('DB_PATH')
        if db_path is None:
            # Get the project root directory (two levels up from this file)
            project_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
            db_path = os.path.join(project_root, "data", "wright_toolkit.db")
        self.db_path = db_path

        # Ensure the directory exists
        os.makedirs(os.path.dirname(os.path.abspath(self.db_path)), exist_ok=True)

        self.init_database()

    def init_database(self):
        """Initialize the database with required tables"""
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()

            # Etale search runs
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS search_runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    space TEXT NOT NULL,
                    expressions INTEGER,
                    enumerated INTEGER,
                    prefilter_survivors INTEGER,
                    members_checked INTEGER,
                    violation_count INTEGER,
                    candidates_found INTEGER,
                    completed INTEGER,
                    elapsed REAL,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            ''')

            # Candidates found by a run
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS etale_candidates (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER,
                    p_expr TEXT NOT NULL,
                    q_expr TEXT NOT NULL,
                    jacobian TEXT,
                    p_index INTEGER,
                    q_index INTEGER,
                    FOREIGN KEY (run_id) REFERENCES search_runs (id)
                )
            ''')

            # Integrality certificates
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS integrality_certificates (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    h TEXT NOT NULL,
                    p TEXT NOT NULL,
                    q TEXT NOT NULL,
                    d_max INTEGER,
                    coeff_degree_max INTEGER,
                    found INTEGER,
                    d INTEGER,
                    coefficients TEXT,
                    relation TEXT,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            ''')

            # Non-regularity lemma reports
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS lemma_reports (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    alpha TEXT NOT NULL,
                    max_degree INTEGER,
                    slack INTEGER,
                    verdict TEXT,
                    degrees TEXT,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            ''')

            conn.commit()

    def save_search_run(self, report_data: Dict, elapsed: float = 0.0) -> Optional[int]:
        """Save a search report (as produced by SearchReport.to_dict) and its candidates"""
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()

                cursor.execute('''
                    INSERT INTO search_runs
                    (space, expressions, enumerated, prefilter_survivors, members_checked,
                     violation_count, candidates_found, completed, elapsed, created_at)
                    VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
                ''', (
                    json.dumps(report_data.get('space'), sort_keys=True),
                    report_data.get('expressions'),
                    report_data.get('enumerated'),
                    report_data.get('prefilter_survivors'),
                    report_data.get('members_checked'),
                    report_data.get('violation_count'),
                    len(report_data.get('candidates', [])),
                    int(bool(report_data.get('completed'))),
                    elapsed,
                    datetime.now()
                ))
                run_id = cursor.lastrowid

                for candidate in report_data.get('candidates', []):
                    self.save_etale_candidate(run_id, candidate, conn=conn)

                return run_id
        except sqlite3.Error as e:
            self.logger.error(f"Error saving search run: {e}")
            return None

    def save_etale_candidate(self, run_id: int, candidate_data: Dict, conn: sqlite3.Connection = None) -> Optional[int]:
        """Save one candidate pair; reuses ``conn`` when called inside save_search_run"""
        def insert(connection):
            cursor = connection.cursor()
            cursor.execute('''
                INSERT INTO etale_candidates (run_id, p_expr, q_expr, jacobian, p_index, q_index)
                VALUES (?, ?, ?, ?, ?, ?)
            ''', (
                run_id,
                candidate_data.get('p'),
                candidate_data.get('q'),
                candidate_data.get('jacobian'),
                candidate_data.get('p_index'),
                candidate_data.get('q_index')
            ))
            return cursor.lastrowid

        if conn is not None:
            return insert(conn)
        try:
            with sqlite3.connect(self.db_path) as connection:
                return insert(connection)
        except sqlite3.Error as e:
            self.logger.error(f"Error saving candidate: {e}")
            return None

    def save_certificate(self, h: str, p: str, q: str, d_max: int, coeff_degree_max: int,
                         certificate_data: Optional[Dict]) -> Optional[int]:
        """Save a certificate search; ``certificate_data`` is None when nothing was found"""
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()

                cursor.execute('''
                    INSERT INTO integrality_certificates
                    (h, p, q, d_max, coeff_degree_max, found, d, coefficients, relation, created_at)
                    VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
                ''', (
                    h, p, q, d_max, coeff_degree_max,
                    int(certificate_data is not None),
                    certificate_data.get('d') if certificate_data else None,
                    json.dumps(certificate_data.get('coefficients')) if certificate_data else None,
                    certificate_data.get('relation') if certificate_data else None,
                    datetime.now()
                ))

                return cursor.lastrowid
        except sqlite3.Error as e:
            self.logger.error(f"Error saving certificate: {e}")
            return None

    def save_lemma_report(self, report_data: Dict) -> Optional[int]:
        """Save a lemma report (as produced by LemmaReport.to_dict)"""
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()

                cursor.execute('''
                    INSERT INTO lemma_reports (alpha, max_degree, slack, verdict, degrees, created_at)
                    VALUES (?, ?, ?, ?, ?, ?)
                ''', (
                    report_data.get('alpha'),
                    report_data.get('max_degree'),
                    report_data.get('slack'),
                    report_data.get('verdict'),
                    json.dumps(report_data.get('degrees')),
                    datetime.now()
                ))

                return cursor.lastrowid
        except sqlite3.Error as e:
            self.logger.error(f"Error saving lemma report: {e}")
            return None

    def get_search_runs(self, limit: Optional[int] = None) -> List[Dict]:
        """Retrieve search runs, newest first"""
        with sqlite3.connect(self.db_path) as conn:
            query = "SELECT * FROM search_runs ORDER BY id DESC"
            if limit:
                query += f" LIMIT {int(limit)}"

            df = pd.read_sql_query(query, conn)
            return df.to_dict('records')

    def get_candidates(self, run_id: int) -> List[Dict]:
        """Candidates of one run in enumeration order"""
        with sqlite3.connect(self.db_path) as conn:
            df = pd.read_sql_query(
                "SELECT * FROM etale_candidates WHERE run_id = ? ORDER BY p_index, q_index",
                conn, params=(run_id,))
            return df.to_dict('records')

    def get_certificates(self, limit: int = 20) -> List[Dict]:
        """Retrieve certificate searches, newest first"""
        with sqlite3.connect(self.db_path) as conn:
            df = pd.read_sql_query("SELECT * FROM integrality_certificates ORDER BY id DESC LIMIT ?",
                                   conn, params=(limit,))
            return df.to_dict('records')

    def get_lemma_reports(self, limit: int = 20) -> List[Dict]:
        """Retrieve lemma reports, newest first"""
        with sqlite3.connect(self.db_path) as conn:
            df = pd.read_sql_query("SELECT * FROM lemma_reports ORDER BY id DESC LIMIT ?",
                                   conn, params=(limit,))
            return df.to_dict('records')

    def get_run_count(self) -> int:
        """Get total number of recorded search runs"""
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute("SELECT COUNT(*) FROM search_runs")
            return cursor.fetchone()[0]
