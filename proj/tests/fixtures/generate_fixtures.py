#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the scanner-report fixture corpus.

Every native report (OpenVAS XML, Nmap XML, ZAP JSON, Nikto CSV, Metasploit
run log) is written next to a canonical JSON-lines transcription of the same
detections. The JSONL files are produced here, independently of the C++
parsers, so the test suite can check parser output against them.

Run from anywhere; output goes to the directory containing this script.
"""

import json
import os
from xml.sax.saxutils import escape

HERE = os.path.dirname(os.path.abspath(__file__))

HOSTS = {
    ("msf2", "vm"): "192.168.56.101",
    ("msf3", "vm"): "192.168.56.102",
    ("msf2", "container"): "192.168.56.201",
    ("msf3", "container"): "192.168.56.202",
}
ENVS = ("vm", "container")

# OpenVAS detections aggregated per CWE. "design" and "other" rows both fold
# into the "other" bucket; "noinfo" rows carry no map entry.
OPENVAS_ROWS = [
    ("16", 2), ("17", 2), ("18", 1), ("20", 82), ("22", 7), ("59", 6),
    ("74", 1), ("79", 33), ("89", 7), ("93", 4), ("94", 13), ("113", 1),
    ("119", 66), ("125", 2), ("134", 5), ("189", 31), ("190", 3),
    ("200", 42), ("254", 2), ("255", 2), ("264", 54), ("275", 1),
    ("284", 5), ("287", 8), ("295", 2), ("310", 22), ("311", 22),
    ("320", 2), ("327", 1), ("345", 1), ("352", 5), ("362", 9), ("384", 1),
    ("399", 51), ("400", 2), ("415", 1), ("416", 2), ("476", 8), ("502", 2),
    ("552", 1), ("601", 5), ("732", 1), ("772", 1), ("787", 1), ("835", 8),
    ("design", 4), ("other", 50), ("noinfo", 123),
]
OPENVAS_PORTS = ["21/tcp", "22/tcp", "80/tcp", "445/tcp", "3306/tcp",
                 "5432/tcp", "general/tcp"]
THREATS = ["High", "Medium", "Low"]

# Nmap service rows: (port, proto, service name, product, version, extrainfo, cwe)
NMAP_ROWS = [
    (21, "tcp", "ftp", "vsftpd", "2.3.4", "", "189"),
    (22, "tcp", "ssh", "OpenSSH", "4.7p1", "", "119"),
    (53, "tcp", "domain", "ISC BIND", "9.4.2", "", "254"),
    (80, "tcp", "http", "Apache httpd", "2.2.8", "", "79"),
    (111, "tcp", "rpcbind", "rpcbind", "2", "RPC #100000", "399"),
    (139, "tcp", "netbios-ssn", "Samba smbd", "3.X - 4.X", "", "22"),
    (631, "tcp", "ipp", "CUPS", "1.7", "", "264"),
    (1099, "tcp", "java-rmi", "Java RMI Registry", "", "", "94"),
    (2049, "tcp", "nfs", "nfs", "2-4", "RPC #100003", "264"),
    (2121, "tcp", "ftp", "ProFTPD", "1.3.1", "", "22"),
    (3306, "tcp", "mysql", "MySQL", "5.0.51a", "", "134"),
    (3500, "tcp", "http", "WEBrick httpd", "1.3.1", "", "20"),
    (3632, "tcp", "distccd", "distccd", "v1", "", "other"),
    (5432, "tcp", "postgresql", "PostgreSQL DB", "8.3.0 - 8.3.7", "", "264"),
    (5900, "tcp", "vnc", "VNC", "protocol 3.3", "", "other"),
    (6667, "tcp", "irc", "UnrealIRCd", "", "", "20"),
    (8009, "tcp", "ajp13", "Apache Jserv", "Protocol v1.3", "", "16"),
    (8180, "tcp", "http", "Apache Tomcat/Coyote JSP engine", "1.1", "", "20"),
    (8787, "tcp", "drb", "Ruby DRb RMI", "", "", "189"),
]
NMAP_ELAPSED = {"vm": "138.93", "container": "113.75"}

# ZAP alert classes: (cweid, alert name, pluginid, path, msf2 vm, msf2 ct,
# msf3 vm, msf3 ct)
ZAP_ROWS = [
    ("89", "SQL Injection", "40018", "/mutillidae/index.php", 358, 422, 2, 2),
    ("97", "Server Side Include", "40009", "/mutillidae/index.php", 1, 1, 0, 0),
    ("79", "Cross Site Scripting (Reflected)", "40012", "/mutillidae/index.php", 1075, 1000, 1, 1),
    ("79", "Cross Site Scripting (Persistent)", "40014", "/dvwa/vulnerabilities/xss_s/", 5, 5, 0, 0),
    ("22", "Path Traversal", "6", "/mutillidae/index.php", 21, 21, 0, 0),
    ("78", "Remote OS Command Injection", "90020", "/dvwa/vulnerabilities/exec/", 361, 342, 0, 0),
    ("98", "Remote File Inclusion", "7", "/dvwa/vulnerabilities/fi/", 209, 206, 0, 0),
    ("200", "Application Error Disclosure", "90022", "/mutillidae/index.php", 242, 246, 1, 1),
    ("548", "Directory Browsing", "0", "/dav/", 14, 15, 21, 21),
    ("472", "Parameter Tampering", "40008", "/mutillidae/index.php", 13, 14, 1, 0),
    ("200", "Buffer Error Disclosure", "30001", "/twiki/bin/view/Main/", 291, 287, 1, 1),
    ("200", "Private IP Disclosure", "2", "/phpMyAdmin/", 136, 139, 1, 1),
]

# Nikto rows: (osvdb, message, count, cwe)
NIKTO_ROWS = [
    (48, "/doc/: The /doc/ directory is browsable.", 1, "other"),
    (119, "/?PageServices: The remote server may allow directory listings through Web Publisher by forcing the server to show all files via 'open directory browsing'. CVE-1999-0269.", 2, "other"),
    (576, "/cgi-bin/: Vulnerability of weblogic", 1, "284"),
    (877, "HTTP TRACE method is active, suggesting the host is vulnerable to XST", 1, "693"),
    (3092, "/phpMyAdmin/: phpMyAdmin directory found", 7, "other"),
    (3233, "/phpinfo.php: PHP is installed, and a test script which runs phpinfo() was found.", 3, "other"),
    (3268, "/icons/: Directory indexing found.", 9, "other"),
    (3288, "/doc/, Abyss 1.03 may reveal directory contents", 1, "119"),
    (12184, "/?=PHPB8B5F2A0-3C92-11d3-A3A9-4C7B08C10000: PHP reveals potentially sensitive information via certain HTTP requests that contain specific QUERY strings.", 1, "other"),
]

# Metasploit modules run against the targets; all succeeded in both envs.
MSF_ROWS = [
    ("auxiliary/scanner/ssl/openssl_heartbleed", "119"),
    ("auxiliary/scanner/ssh/ssh_enumusers", "200"),
    ("auxiliary/scanner/http/options", "200"),
    ("auxiliary/scanner/http/trace", "200"),
    ("auxiliary/scanner/http/tomcat_enum", "200"),
    ("auxiliary/scanner/http/ssl_version", "310"),
    ("auxiliary/scanner/ssl/openssl_ccs", "310"),
    ("auxiliary/scanner/http/apache_optionsbleed", "416"),
    ("auxiliary/scanner/rservices/rexec_login", "other"),
    ("auxiliary/scanner/rservices/rlogin_login", "other"),
    ("auxiliary/scanner/rservices/rsh_login", "other"),
    ("auxiliary/server/openssl_heartbeat_client_memory", "119"),
    ("exploit/linux/samba/is_known_pipename", "94"),
    ("exploit/linux/samba/setinfopolicy_heap", "189"),
    ("exploit/unix/misc/distcc_exec", "16"),
    ("exploit/unix/irc/unreal_ircd_3281_backdoor", "20"),
    ("exploit/unix/ftp/proftpd_modcopy_exec", "284"),
    ("exploit/unix/webapp/twiki_history", "other"),
    ("exploit/multi/browser/java_storeimagearray", "20"),
    ("exploit/multi/http/php_cgi_arg_injection", "other"),
    ("exploit/multi/samba/usermap_script", "noinfo"),
]


def cwe_label(raw):
    if raw in ("other", "design"):
        return "other"
    if raw == "noinfo":
        return "noinfo"
    return "CWE-" + raw


def jsonl_line(tool, env, target, detector, cwe, location, count):
    return json.dumps({
        "tool": tool, "env": env, "target": target, "detector_id": detector,
        "cwe": cwe, "location": location, "count": count,
    }, separators=(",", ":"))


def jsonl_sort_key(line):
    o = json.loads(line)
    return (o["target"], o["detector_id"], o["location"])


def write(path, text):
    # Interchange files are kept in canonical order: one tool per file, then
    # target, detector_id and location.
    if path.endswith(".jsonl") and text:
        text = "\n".join(sorted(text.splitlines(), key=jsonl_sort_key)) + "\n"
    full = os.path.join(HERE, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def openvas_oid(raw, i):
    return "t4-%s-%03d" % ("cwe" + raw if raw.isdigit() else raw, i)


def gen_openvas():
    for env in ENVS:
        host = HOSTS[("msf2", env)]
        out = ['<?xml version="1.0" encoding="UTF-8"?>',
               '<report id="table4-%s">' % env, "  <results>"]
        lines = []
        n = 0
        for raw, count in OPENVAS_ROWS:
            for i in range(1, count + 1):
                oid = openvas_oid(raw, i)
                port = OPENVAS_PORTS[n % len(OPENVAS_PORTS)]
                threat = THREATS[n % len(THREATS)]
                out += [
                    '    <result id="r%04d">' % n,
                    "      <name>Transcribed detection %s</name>" % oid,
                    "      <host>%s</host>" % host,
                    "      <port>%s</port>" % port,
                    '      <nvt oid="%s">' % oid,
                    "        <name>Transcribed detection %s</name>" % oid,
                    "        <cve>NOCVE</cve>",
                    "      </nvt>",
                    "      <threat>%s</threat>" % threat,
                    "    </result>",
                ]
                cwe = "noinfo" if raw == "noinfo" else cwe_label(raw)
                lines.append(jsonl_line("openvas", env, host, oid, cwe, port, 1))
                n += 1
        out += ["  </results>", "</report>", ""]
        write("openvas/table4_%s.xml" % env, "\n".join(out))
        write("corpus/openvas_%s.jsonl" % env, "\n".join(lines) + "\n")

    prefixes = {}
    for raw, _ in OPENVAS_ROWS:
        if raw == "noinfo":
            continue
        key = "t4-%s-" % ("cwe" + raw if raw.isdigit() else raw)
        prefixes[key] = "other" if raw in ("design", "other") else "CWE-" + raw
    write("openvas/cwe_map.json",
          json.dumps({"exact": {}, "prefix": prefixes}, indent=2, sort_keys=True) + "\n")


def gen_nmap():
    for env in ENVS:
        host = HOSTS[("msf2", env)]
        out = ['<?xml version="1.0" encoding="UTF-8"?>',
               '<nmaprun scanner="nmap" args="nmap -sV -O %s" version="7.70">' % host,
               "  <host>",
               '    <status state="up"/>',
               '    <address addr="%s" addrtype="ipv4"/>' % host,
               "    <ports>"]
        lines = []
        for port, proto, name, product, version, extra, cwe in NMAP_ROWS:
            attrs = 'name="%s" product="%s"' % (escape(name), escape(product))
            if version:
                attrs += ' version="%s"' % escape(version)
            if extra:
                attrs += ' extrainfo="%s"' % escape(extra)
            out += ['      <port protocol="%s" portid="%d">' % (proto, port),
                    '        <state state="open" reason="syn-ack"/>',
                    '        <service %s method="probed"/>' % attrs,
                    "      </port>"]
            detector = "service:" + product + ("/" + version if version else "")
            lines.append(jsonl_line("nmap", env, host, detector, cwe_label(cwe),
                                    "%d/%s" % (port, proto), 1))
        # A closed port is present in real scans and must not produce a finding.
        out += ['      <port protocol="tcp" portid="8080">',
                '        <state state="closed" reason="reset"/>',
                '        <service name="http-proxy" method="table"/>',
                "      </port>",
                "    </ports>", "  </host>",
                "  <runstats>",
                '    <finished time="0" elapsed="%s" exit="success"/>' % NMAP_ELAPSED[env],
                "  </runstats>", "</nmaprun>", ""]
        write("nmap/table5_%s.xml" % env, "\n".join(out))
        write("corpus/nmap_%s.jsonl" % env, "\n".join(lines) + "\n")


def gen_zap():
    for target, vm_idx, ct_idx in (("msf2", 4, 5), ("msf3", 6, 7)):
        for env, idx in (("vm", vm_idx), ("container", ct_idx)):
            host = HOSTS[(target, env)]
            alerts = []
            lines = []
            for row in ZAP_ROWS:
                cweid, name, plugin, path, count = row[0], row[1], row[2], row[3], row[idx]
                if count == 0:
                    continue
                instances = [{"uri": "http://%s%s?case=%d" % (host, path, i),
                              "method": "GET", "param": "p%d" % (i % 7)}
                             for i in range(count)]
                alerts.append({"pluginid": plugin, "alertRef": plugin, "alert": name,
                               "name": name, "riskcode": "2", "cweid": cweid,
                               "count": str(count), "instances": instances})
                lines.append(jsonl_line("zap", env, host, "zap:" + plugin,
                                        "CWE-" + cweid, path, count))
            doc = {"@version": "2.8.0",
                   "site": [{"@name": "http://" + host, "@host": host,
                             "@port": "80", "@ssl": "false", "alerts": alerts}]}
            write("zap/table6_%s_%s.json" % (target, env), json.dumps(doc, indent=1) + "\n")
            write("corpus/zap_%s_%s.jsonl" % (target, env), "\n".join(lines) + "\n")


def csv_quote(s):
    return '"' + s.replace('"', '""') + '"'


def gen_nikto():
    for env in ENVS:
        host = HOSTS[("msf2", env)]
        out = ["host,port,osvdb,message"]
        lines = []
        for osvdb, message, count, cwe in NIKTO_ROWS:
            for _ in range(count):
                out.append(",".join([csv_quote(host), "80", "OSVDB-%d" % osvdb,
                                     csv_quote(message)]))
            lines.append(jsonl_line("nikto", env, host, "OSVDB-%d" % osvdb,
                                    cwe_label(cwe), "80/tcp", count))
        write("nikto/table7_%s.csv" % env, "\n".join(out) + "\n")
        write("corpus/nikto_%s.jsonl" % env, "\n".join(lines) + "\n")


def gen_msf():
    for env in ENVS:
        out = ["# metasploit run log: module result"]
        lines = []
        for module, cwe in MSF_ROWS:
            out.append("%s SUCCESS" % module)
            lines.append(jsonl_line("msf", env, "", module, cwe_label(cwe), "", 1))
        write("msf/table8_%s.log" % env, "\n".join(out) + "\n")
        write("corpus/msf_%s.jsonl" % env, "\n".join(lines) + "\n")


if __name__ == "__main__":
    gen_openvas()
    gen_nmap()
    gen_zap()
    gen_nikto()
    gen_msf()
